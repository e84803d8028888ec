#include "nlb/json_io.hpp"

#include <fstream>
#include <sstream>

namespace nlb {

namespace {

json mat2_to_json(const CMat2& m) {
    json rows = json::array();
    for (int i = 0; i < 2; ++i) {
        json row = json::array();
        for (int j = 0; j < 2; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(row);
    }
    return rows;
}

CMat2 mat2_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected a 2x2 matrix");
    CMat2 m;
    for (int i = 0; i < 2; ++i) {
        if (!j[i].is_array() || j[i].size() != 2)
            throw std::invalid_argument("expected a 2x2 matrix");
        for (int jj = 0; jj < 2; ++jj) {
            const auto& e = j[i][jj];
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("matrix entries must be [re, im] pairs");
            m(i, jj) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    return m;
}

Vec3 vec3_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument(std::string(what) + " must be an array of 3 reals");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

json channel_to_json(const QubitChannel& ch) {
    json j;
    j["t"] = {ch.t[0], ch.t[1], ch.t[2]};
    j["lambda"] = {ch.lambda[0], ch.lambda[1], ch.lambda[2]};
    if (ch.pre_unitary) j["pre_unitary"] = mat2_to_json(*ch.pre_unitary);
    if (ch.post_unitary) j["post_unitary"] = mat2_to_json(*ch.post_unitary);
    return j;
}

QubitChannel channel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("t") || !j.contains("lambda"))
        throw std::invalid_argument("channel JSON needs \"t\" and \"lambda\"");
    QubitChannel ch;
    ch.t = vec3_from_json(j["t"], "t");
    ch.lambda = vec3_from_json(j["lambda"], "lambda");
    if (j.contains("pre_unitary")) ch.pre_unitary = mat2_from_json(j["pre_unitary"]);
    if (j.contains("post_unitary")) ch.post_unitary = mat2_from_json(j["post_unitary"]);
    return ch;
}

QubitChannel channel_from_spec(const std::string& spec) {
    std::string text = spec;
    const auto first = spec.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || spec[first] != '{') {
        std::ifstream in(spec);
        if (!in) throw std::invalid_argument("cannot open channel file: " + spec);
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return channel_from_json(json::parse(text));
}

json state_to_json(const TwoQubitState& s) {
    json entries = json::array();
    for (const cplx& v : s.rho().a) entries.push_back({v.real(), v.imag()});
    return json{{"rho", entries}};
}

TwoQubitState state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rho") || !j["rho"].is_array() || j["rho"].size() != 16)
        throw std::invalid_argument("state JSON needs 16 row-major [re, im] entries");
    CMat4 rho;
    for (int i = 0; i < 16; ++i) {
        const auto& e = j["rho"][i];
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("state entries must be [re, im] pairs");
        rho.a[i] = cplx(e[0].get<double>(), e[1].get<double>());
    }
    return TwoQubitState(rho);
}

json volume_report_to_json(const VolumeReport& r) {
    json j;
    j["seed"] = r.seed;
    j["samples_drawn"] = r.samples_drawn;
    j["cp_accepted"] = r.cp_accepted;
    j["eb_count"] = r.eb_count;
    j["nlb_mes_count"] = r.nlb_mes_count;
    j["snlb_count"] = r.snlb_count;
    j["mode"] = r.mode == VolumeMode::unital ? "unital" : "full";
    j["workers"] = r.workers;
    auto frac = [](std::optional<double> f) {
        return f ? json(*f) : json(nullptr);
    };
    j["fractions"] = {{"eb", frac(r.eb_fraction())},
                      {"nlb_mes", frac(r.nlb_mes_fraction())},
                      {"snlb", frac(r.snlb_fraction())}};
    return j;
}

namespace {

void csv_number(std::ostringstream& os, double v) {
    // '.' decimal separator regardless of locale
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

}  // namespace

std::string correlation_tensors_csv(const CorrelationTensors& ct) {
    std::ostringstream os;
    os << "tensor,i,x,y,z\n";
    auto row = [&](const char* name, int i, double a, double b, double c) {
        os << name << ',' << i << ',';
        csv_number(os, a);
        os << ',';
        csv_number(os, b);
        os << ',';
        csv_number(os, c);
        os << '\n';
    };
    row("r", 0, ct.r[0], ct.r[1], ct.r[2]);
    row("s", 0, ct.s[0], ct.s[1], ct.s[2]);
    for (int i = 0; i < 3; ++i) row("T", i, ct.T(i, 0), ct.T(i, 1), ct.T(i, 2));
    return os.str();
}

std::string sweep_rows_csv(const std::vector<SweepRow>& rows, const std::string& param_name) {
    std::ostringstream os;
    os << param_name << ",best_M,schmidt_lambda,alpha,beta,gamma\n";
    for (const SweepRow& r : rows) {
        csv_number(os, r.parameter);
        os << ',';
        csv_number(os, r.best_M);
        os << ',';
        csv_number(os, r.spec.schmidt_lambda);
        for (double a : r.spec.euler) {
            os << ',';
            csv_number(os, a);
        }
        os << '\n';
    }
    return os.str();
}

json sweep_rows_json(const std::vector<SweepRow>& rows, const std::string& param_name) {
    json arr = json::array();
    for (const SweepRow& r : rows) {
        arr.push_back({{param_name, r.parameter},
                       {"best_M", r.best_M},
                       {"schmidt_lambda", r.spec.schmidt_lambda},
                       {"euler", {r.spec.euler[0], r.spec.euler[1], r.spec.euler[2]}}});
    }
    return arr;
}

}  // namespace nlb
