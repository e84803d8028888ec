#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nlb/json_io.hpp"
#include "nlb/nlbreak.hpp"
#include "nlb/paper_suite.hpp"
#include "nlb/volume.hpp"

// Command-line front end: analyze-channel, sweep, volume, verify-paper.
// Exit codes: 0 success, 1 check failure, 2 usage or parse error.

namespace {

using nlb::json;

enum class Format { table, json, csv };

Format pick_format(const std::string& flag) {
    if (flag == "json") return Format::json;
    if (flag == "csv") return Format::csv;
    if (flag == "table") return Format::table;
    // default: human table on a terminal, JSON when piped
    return isatty(fileno(stdout)) ? Format::table : Format::json;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
}

struct ChannelArgs {
    std::string channel_spec;
    std::string family;
    double p = -1.0, q = -1.0, u = 0.0, v = 0.0;
    bool u_set = false, v_set = false;
};

nlb::QubitChannel resolve_channel(const ChannelArgs& a) {
    if (!a.channel_spec.empty()) return nlb::channel_from_spec(a.channel_spec);
    if (a.family == "ampdamp") {
        if (a.p < 0.0) throw CLI::ValidationError("--p is required for the ampdamp family");
        return nlb::amplitude_damping(a.p);
    }
    if (a.family == "qfamily") {
        if (a.q < 0.0) throw CLI::ValidationError("--q is required for the qfamily family");
        return nlb::genuine_hidden_family(a.q);
    }
    if (a.family == "extremal") {
        if (!a.u_set || !a.v_set)
            throw CLI::ValidationError("--u and --v are required for the extremal family");
        return nlb::extremal_channel(a.u, a.v);
    }
    if (a.family == "identity") return nlb::QubitChannel::identity();
    if (a.family == "depolarizing") return nlb::QubitChannel::depolarizing();
    if (a.family.empty())
        throw CLI::ValidationError("provide --channel <json|path> or --family <name>");
    throw CLI::ValidationError("unknown family: " + a.family);
}

void add_channel_flags(CLI::App* cmd, ChannelArgs& a) {
    cmd->add_option("--channel", a.channel_spec, "inline channel JSON or a path to a JSON file");
    cmd->add_option("--family", a.family,
                    "named family: ampdamp, extremal, qfamily, identity, depolarizing");
    cmd->add_option("--p", a.p, "amplitude damping parameter");
    cmd->add_option("--q", a.q, "genuine-hidden family parameter");
    cmd->add_option("--u", a.u, "extremal channel angle u")->each([&](const std::string&) {
        a.u_set = true;
    });
    cmd->add_option("--v", a.v, "extremal channel angle v")->each([&](const std::string&) {
        a.v_set = true;
    });
}

int cmd_analyze(const ChannelArgs& args, const std::string& format, const std::string& out) {
    const nlb::QubitChannel ch = resolve_channel(args);
    const bool cp = nlb::is_completely_positive(ch);

    if (pick_format(format) == Format::csv) {
        // CSV export: the Choi state's correlation tensors
        if (!cp) throw std::invalid_argument("channel is not completely positive");
        const auto ct = nlb::correlation_tensors(nlb::choi_state(ch));
        emit(nlb::correlation_tensors_csv(ct), out);
        return 0;
    }

    json j;
    j["channel"] = nlb::channel_to_json(ch);
    j["completely_positive"] = cp;
    std::ostringstream table;
    table << "completely positive  " << (cp ? "yes" : "no") << '\n';

    if (cp) {
        const bool unital = nlb::is_unital(ch);
        const bool eb = nlb::is_entanglement_breaking(ch);
        const bool mes = nlb::breaks_mes_nonlocality(ch);
        const bool snlb = nlb::is_strongly_nlb(ch);
        const nlb::TwoQubitState choi = nlb::choi_state(ch);
        const nlb::CSpectrum cs = nlb::c_spectrum(choi);
        const double m_choi = nlb::horodecki_M(choi);
        const auto hid = nlb::hidden_nonlocality(choi);

        j["unital"] = unital;
        j["entanglement_breaking"] = eb;
        j["breaks_mes_nonlocality"] = mes;
        j["strongly_nonlocality_breaking"] = snlb;
        j["choi_c_spectrum"] = {cs.values[0], cs.values[1], cs.values[2], cs.values[3]};
        j["choi_c_ratio"] = cs.ratio;
        j["choi_M"] = m_choi;
        j["filtered_optimal_violation"] = hid.optimal_violation;

        table << "unital               " << (unital ? "yes" : "no") << '\n'
              << "entanglement break.  " << (eb ? "yes" : "no") << '\n'
              << "NLB-MES              " << (mes ? "yes" : "no") << '\n'
              << "strongly NLB         " << (snlb ? "yes" : "no") << '\n'
              << "M(Choi)              " << m_choi << '\n'
              << "C-spectrum           [" << cs.values[0] << ", " << cs.values[1] << ", "
              << cs.values[2] << ", " << cs.values[3] << "]\n"
              << "C ratio              " << cs.ratio << '\n'
              << "filtered violation   " << hid.optimal_violation << '\n';
    }

    const Format f = pick_format(format);
    emit(f == Format::table ? table.str() : j.dump(2) + "\n", out);
    return 0;
}

int cmd_sweep(const ChannelArgs& args, double param_step, const nlb::SweepGrid& grid,
              int workers, bool no_refine, const std::string& format, const std::string& out) {
    std::vector<nlb::SweepRow> rows;
    std::string param_name = "parameter";
    std::ostringstream extra;

    auto sweep_channel = [&](const nlb::QubitChannel& ch, double param) {
        const nlb::SweepResult r = nlb::max_M_over_pure_inputs(ch, grid, workers, !no_refine);
        rows.push_back(nlb::SweepRow{param, r.best_M, r.best_spec});
    };

    if (args.family == "ampdamp") {
        param_name = "p";
        for (double p = 0.0; p <= 1.0 + 1e-9; p += param_step)
            sweep_channel(nlb::amplitude_damping(std::min(p, 1.0)), std::min(p, 1.0));
    } else if (args.family == "qfamily") {
        param_name = "q";
        for (double q = 0.0; q <= 1.0 / std::sqrt(2.0) + 1e-9; q += param_step)
            sweep_channel(nlb::genuine_hidden_family(q), q);
        const double boundary = nlb::estimate_qfamily_boundary(0.55, 0.70, grid, workers);
        extra << "# crossing estimate: max M over pure inputs exceeds 1 above q ~= "
              << boundary << '\n';
    } else if (args.family == "extremal") {
        param_name = "u";
        if (!args.v_set) throw CLI::ValidationError("--v is required for an extremal sweep");
        for (double u = 0.0; u <= 2.0 * M_PI + 1e-9; u += param_step)
            sweep_channel(nlb::extremal_channel(u, args.v), u);
    } else {
        const nlb::QubitChannel ch = resolve_channel(args);
        sweep_channel(ch, 0.0);
    }

    const Format f = pick_format(format.empty() ? "csv" : format);
    std::string text;
    if (f == Format::json) {
        json j;
        j["rows"] = nlb::sweep_rows_json(rows, param_name);
        if (!extra.str().empty()) j["note"] = extra.str();
        text = j.dump(2) + "\n";
    } else {
        text = nlb::sweep_rows_csv(rows, param_name) + extra.str();
    }
    emit(text, out);
    return 0;
}

int cmd_volume(std::uint64_t samples, std::uint64_t seed, bool unital, int workers,
               const std::string& format, const std::string& out) {
    const nlb::VolumeReport r = nlb::estimate_volumes(
        samples, seed, unital ? nlb::VolumeMode::unital : nlb::VolumeMode::full, workers);

    const Format f = pick_format(format);
    if (f == Format::json || f == Format::csv) {
        emit(nlb::volume_report_to_json(r).dump(2) + "\n", out);
        return 0;
    }
    std::ostringstream t;
    auto frac = [&](std::optional<double> v) {
        return v ? std::to_string(*v) : std::string("n/a");
    };
    t << "mode            " << (unital ? "unital" : "full") << '\n'
      << "seed            " << r.seed << '\n'
      << "samples drawn   " << r.samples_drawn << '\n'
      << "CP accepted     " << r.cp_accepted << '\n'
      << "EB              " << r.eb_count << "  (" << frac(r.eb_fraction()) << ")\n"
      << "NLB-MES         " << r.nlb_mes_count << "  (" << frac(r.nlb_mes_fraction()) << ")\n"
      << "strongly NLB    " << r.snlb_count << "  (" << frac(r.snlb_fraction()) << ")\n";
    emit(t.str(), out);
    return 0;
}

int cmd_verify(bool fast, int workers, const std::string& only, const std::string& format,
               const std::string& out) {
    nlb::SuiteOptions opt;
    opt.fast = fast;
    opt.workers = workers;
    opt.only = only;
    const auto results = nlb::run_paper_suite(opt);

    bool all_pass = true;
    const Format f = pick_format(format);
    if (f == Format::json) {
        json arr = json::array();
        for (const auto& r : results) {
            all_pass = all_pass && r.pass;
            arr.push_back({{"id", r.id},
                           {"description", r.description},
                           {"pass", r.pass},
                           {"detail", r.detail},
                           {"seconds", r.seconds}});
        }
        emit(json{{"checks", arr}, {"all_pass", all_pass}}.dump(2) + "\n", out);
    } else {
        std::ostringstream t;
        for (const auto& r : results) {
            all_pass = all_pass && r.pass;
            char line[4096];
            std::snprintf(line, sizeof line, "%-4s %-4s %6.2fs  %s\n     %s\n", r.id.c_str(),
                          r.pass ? "PASS" : "FAIL", r.seconds, r.description.c_str(),
                          r.detail.c_str());
            t << line;
        }
        t << (all_pass ? "all checks passed\n" : "SOME CHECKS FAILED\n");
        emit(t.str(), out);
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CHSH nonlocality-breaking analysis of qubit channels"};
    app.require_subcommand(1);

    std::string format, out;
    app.add_option("--format", format, "output format: table, json, csv")->capture_default_str();
    app.add_option("--out", out, "write output to this file instead of stdout");

    int workers = 0;
    if (const char* env = std::getenv("NLB_WORKERS")) workers = std::atoi(env);
    app.add_option("--workers", workers, "worker thread count (0: hardware)");

    // analyze-channel
    auto* analyze = app.add_subcommand("analyze-channel", "classify one channel");
    analyze->fallthrough();
    ChannelArgs an_args;
    add_channel_flags(analyze, an_args);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "maximal M over pure inputs across a family");
    sweep->fallthrough();
    ChannelArgs sw_args;
    add_channel_flags(sweep, sw_args);
    double param_step = 0.05;
    nlb::SweepGrid grid;
    bool no_refine = false;
    sweep->add_option("--param-step", param_step, "family parameter step")->capture_default_str();
    sweep->add_option("--angle-step", grid.angle_step, "Euler grid step")->capture_default_str();
    sweep->add_option("--lambda-step", grid.lambda_step, "Schmidt grid step")
        ->capture_default_str();
    sweep->add_flag("--no-refine", no_refine, "skip the Nelder-Mead polish of the argmax");

    // volume
    auto* volume = app.add_subcommand("volume", "Monte Carlo channel-class volumes");
    volume->fallthrough();
    double samples = 1e6;
    std::uint64_t seed = 20240809;
    bool unital = false;
    volume->add_option("--samples", samples, "number of candidate draws")->capture_default_str();
    volume->add_option("--seed", seed, "generator seed")->capture_default_str();
    volume->add_flag("--unital", unital, "restrict to unital channels (t = 0)");

    // verify-paper
    auto* verify = app.add_subcommand("verify-paper", "run the published-number checks");
    verify->fallthrough();
    bool fast = false, as_json = false;
    std::string only;
    verify->add_flag("--fast", fast, "volume check at 1e6 samples with widened tolerance");
    verify->add_flag("--json", as_json, "machine-readable results");
    verify->add_option("--only", only, "run only checks whose id starts with this prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(an_args, format, out);
        if (sweep->parsed())
            return cmd_sweep(sw_args, param_step, grid, workers, no_refine, format, out);
        if (volume->parsed())
            return cmd_volume(static_cast<std::uint64_t>(samples), seed, unital, workers, format,
                              out);
        if (verify->parsed())
            return cmd_verify(fast, workers, only, as_json ? "json" : format, out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
