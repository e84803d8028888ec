#include "nlb/nlbreak.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "detail/nelder_mead.hpp"

namespace nlb {

namespace {

double wrap_angle(double a) {
    const double two_pi = 2.0 * M_PI;
    double w = std::fmod(a, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

RMat3 euler_rotation(double alpha, double beta, double gamma) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const double cb = std::cos(beta), sb = std::sin(beta);
    const double cg = std::cos(gamma), sg = std::sin(gamma);
    RMat3 r;
    r(0, 0) = ca * cb * cg - sa * sg;
    r(0, 1) = -ca * cb * sg - sa * cg;
    r(0, 2) = ca * sb;
    r(1, 0) = sa * cb * cg + ca * sg;
    r(1, 1) = -sa * cb * sg + ca * cg;
    r(1, 2) = sa * sb;
    r(2, 0) = -sb * cg;
    r(2, 1) = sb * sg;
    r(2, 2) = cb;
    return r;
}

int default_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

double m_of_tensors(const RMat3& T) {
    RMat3 u;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += T(k, i) * T(k, j);
            u(i, j) = s;
        }
    const auto eig = eig_symmetric(u);
    return eig.values[0] + eig.values[1];
}

constexpr double kMesTol = 1e-12;  // saturation guard on M(choi) <= 1

}  // namespace

PureInputSpec PureInputSpec::wrapped(double lambda, const std::array<double, 3>& euler) {
    if (lambda < 0.0 || lambda > 1.0)
        throw std::invalid_argument("Schmidt coefficient must be in [0, 1]");
    return PureInputSpec{lambda, {wrap_angle(euler[0]), wrap_angle(euler[1]), wrap_angle(euler[2])}};
}

bool breaks_mes_nonlocality(const QubitChannel& ch) {
    return horodecki_M(choi_state(ch)) <= 1.0 + kMesTol;
}

PureOutputTensors output_T_matrix(const QubitChannel& ch, const PureInputSpec& spec) {
    if (!ch.is_canonical())
        throw std::invalid_argument("output_T_matrix requires a canonical channel");
    if (!is_completely_positive(ch))
        throw std::domain_error("channel is not completely positive");

    const double l = spec.schmidt_lambda;
    const double alpha = 2.0 * std::sqrt(l * (1.0 - l));
    const double m = 2.0 * l - 1.0;
    const RMat3 R = euler_rotation(spec.euler[0], spec.euler[1], spec.euler[2]);
    const Vec3 dc{ch.lambda[0], -ch.lambda[1], ch.lambda[2]};

    PureOutputTensors out;
    for (int i = 0; i < 3; ++i) {
        const double row_scale = (i == 2) ? 1.0 : alpha;
        for (int j = 0; j < 3; ++j) out.T(i, j) = row_scale * R(i, j) * dc[j];
    }
    for (int j = 0; j < 3; ++j) out.T(2, j) += m * ch.t[j];

    out.r = {0.0, 0.0, m};
    for (int j = 0; j < 3; ++j) out.s[j] = ch.t[j] + m * R(2, j) * dc[j];
    return out;
}

double m_value_of_spec(const QubitChannel& ch, const PureInputSpec& spec) {
    return m_of_tensors(output_T_matrix(ch, spec).T);
}

CMat2 su2_of_euler(double alpha, double beta, double gamma) {
    // exp(-i alpha sz/2) exp(-i beta sy/2) exp(-i gamma sz/2)
    const double c = std::cos(beta / 2.0), s = std::sin(beta / 2.0);
    const cplx ep = std::polar(1.0, -(alpha + gamma) / 2.0);
    const cplx em = std::polar(1.0, -(alpha - gamma) / 2.0);
    CMat2 u;
    u(0, 0) = ep * c;
    u(0, 1) = -em * s;
    u(1, 0) = std::conj(em) * s;
    u(1, 1) = std::conj(ep) * c;
    return u;
}

TwoQubitState pure_input_state(const PureInputSpec& spec) {
    // |a> = (I (x) V)(sqrt(l)|00> + sqrt(1-l)|11>) with V^T the SU(2)
    // element carrying the requested Euler rotation.
    const CMat2 v = su2_of_euler(spec.euler[0], spec.euler[1], spec.euler[2]).transpose();
    const double l = spec.schmidt_lambda;
    std::array<cplx, 4> vec{};
    // sqrt(l) |0> (x) V|0> + sqrt(1-l) |1> (x) V|1>
    vec[0] = std::sqrt(l) * v(0, 0);
    vec[1] = std::sqrt(l) * v(1, 0);
    vec[2] = std::sqrt(1.0 - l) * v(0, 1);
    vec[3] = std::sqrt(1.0 - l) * v(1, 1);
    CMat4 rho;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rho(i, j) = vec[i] * std::conj(vec[j]);
    return TwoQubitState(rho);
}

SweepResult max_M_over_pure_inputs(const QubitChannel& ch, const SweepGrid& grid, int workers,
                                   bool refine) {
    if (!is_completely_positive(ch))
        throw std::domain_error("channel is not completely positive");

    const SweepCtx ctx = make_sweep_ctx(ch.t, ch.lambda, grid);
    const auto& ops = active_kernels();
    const int na = static_cast<int>(ctx.ang.size());
    const int nl = static_cast<int>(ctx.lam.size());

    const int nthreads = std::min(default_workers(workers), na);
    std::vector<SweepBest> partial(nthreads);
    std::vector<std::thread> threads;
    threads.reserve(nthreads);
    for (int w = 0; w < nthreads; ++w) {
        const int b = static_cast<int>(static_cast<long long>(na) * w / nthreads);
        const int e = static_cast<int>(static_cast<long long>(na) * (w + 1) / nthreads);
        threads.emplace_back([&, w, b, e] { partial[w] = ops.sweep_slice(ctx, b, e); });
    }
    for (auto& th : threads) th.join();

    SweepBest best;
    for (const SweepBest& p : partial) {
        if (p.m > best.m || (p.m == best.m && p.flat < best.flat)) best = p;
    }

    const int il = static_cast<int>(best.flat % nl);
    std::uint64_t rest = best.flat / nl;
    const int ig = static_cast<int>(rest % na);
    rest /= na;
    const int ib = static_cast<int>(rest % na);
    const int ia = static_cast<int>(rest / na);

    SweepResult result;
    result.grid = grid;
    result.points_evaluated =
        static_cast<std::uint64_t>(na) * na * na * nl;
    result.best_spec =
        PureInputSpec::wrapped(ctx.lam[il], {ctx.ang[ia], ctx.ang[ib], ctx.ang[ig]});
    result.best_M = best.m;

    if (refine) {
        const Vec3 t = ch.t;
        const Vec3 dc{ch.lambda[0], -ch.lambda[1], ch.lambda[2]};
        auto neg_m = [&](const std::array<double, 4>& x) {
            const double l = std::clamp(x[3], 0.0, 1.0);
            const RMat3 R = euler_rotation(x[0], x[1], x[2]);
            RMat3 T;
            const double alpha = 2.0 * std::sqrt(l * (1.0 - l));
            const double mc = 2.0 * l - 1.0;
            for (int i = 0; i < 3; ++i) {
                const double row_scale = (i == 2) ? 1.0 : alpha;
                for (int j = 0; j < 3; ++j) T(i, j) = row_scale * R(i, j) * dc[j];
            }
            for (int j = 0; j < 3; ++j) T(2, j) += mc * t[j];
            return -m_of_tensors(T);
        };
        const std::array<double, 4> start{result.best_spec.euler[0], result.best_spec.euler[1],
                                          result.best_spec.euler[2],
                                          result.best_spec.schmidt_lambda};
        const auto [arg, fmin] = detail::nelder_mead_min<4>(neg_m, start, 0.04);
        if (-fmin > result.best_M) {
            result.best_M = -fmin;
            result.best_spec = PureInputSpec::wrapped(std::clamp(arg[3], 0.0, 1.0),
                                                      {arg[0], arg[1], arg[2]});
        }
        result.refined = true;
    }
    return result;
}

bool is_strongly_nlb(const QubitChannel& ch) {
    return !hidden_nonlocality(choi_state(ch)).violates;
}

QubitChannel amplitude_damping(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("damping parameter must be in [0, 1]");
    const double s = std::sqrt(1.0 - p);
    return QubitChannel::canonical({0.0, 0.0, p}, {s, s, 1.0 - p});
}

QubitChannel extremal_channel(double u, double v) {
    const double cu = std::cos(u), cv = std::cos(v);
    return QubitChannel::canonical({0.0, 0.0, std::sin(u) * std::sin(v)}, {cu, cv, cu * cv});
}

QubitChannel genuine_hidden_family(double q) {
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("family parameter must be in [0, 1]");
    return QubitChannel::canonical({0.0, 0.0, 1.0 - q}, {-q, q, -q});
}

bool verify_mesbreak_implies_maxmixed_local(const QubitChannel& ch, const TwoQubitState& sigma) {
    if (!breaks_mes_nonlocality(ch))
        throw std::invalid_argument("channel must break MES nonlocality");
    const CMat2 red = partial_trace_second(sigma.rho());
    CMat2 dev = red;
    dev(0, 0) -= 0.5;
    dev(1, 1) -= 0.5;
    if (dev.max_abs() > 1e-9)
        throw std::invalid_argument("free-side reduction is not maximally mixed");
    return horodecki_M(apply_one_sided(ch, sigma)) <= 1.0 + 1e-9;
}

bool product_eigenvalue_bound(const RMat3& a, const RMat3& b) {
    constexpr double slack = 1e-12;
    const auto ea = eig_symmetric(a);
    const auto eb = eig_symmetric(b);
    if (ea.values[2] <= 0.0 || eb.values[2] <= 0.0)
        throw std::invalid_argument("product_eigenvalue_bound requires positive definite inputs");
    if (eb.values[0] > 1.0 + slack)
        throw std::invalid_argument("product_eigenvalue_bound requires eig(B) <= 1");
    if (ea.values[0] + ea.values[1] > 1.0 + slack)
        throw std::invalid_argument("product_eigenvalue_bound requires lambda1(A) + lambda2(A) <= 1");

    // eig(AB) = eig(A^1/2 B A^1/2), a symmetric problem
    RMat3 sq;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += ea.vectors(i, k) * std::sqrt(ea.values[k]) * ea.vectors(j, k);
            sq(i, j) = s;
        }
    const RMat3 prod = sq * b * sq;
    const auto ep = eig_symmetric(prod);
    return ep.values[0] + ep.values[1] <= 1.0 + 1e-10;
}

double estimate_qfamily_boundary(double lo, double hi, const SweepGrid& grid, int workers) {
    auto above = [&](double q) {
        return max_M_over_pure_inputs(genuine_hidden_family(q), grid, workers, true).best_M >
               1.0 + 1e-9;
    };
    if (above(lo) || !above(hi))
        throw std::domain_error("qfamily boundary is not bracketed by [lo, hi]");
    for (int it = 0; it < 24 && hi - lo > 1e-5; ++it) {
        const double mid = 0.5 * (lo + hi);
        (above(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace nlb
