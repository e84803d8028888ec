#include <doctest.h>

#include <cmath>

#include "nlb/channel.hpp"
#include "nlb/json_io.hpp"
#include "nlb/nlbreak.hpp"
#include "nlb/state.hpp"
#include "test_util.hpp"

using namespace nlb;

namespace {

TwoQubitState phi_plus() {
    CMat4 m;
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return TwoQubitState(m);
}

TwoQubitState singlet() {
    CMat4 m;
    m(1, 1) = m(2, 2) = 0.5;
    m(1, 2) = m(2, 1) = -0.5;
    return TwoQubitState(m);
}

TwoQubitState p00() {
    CMat4 m;
    m(0, 0) = 1.0;
    return TwoQubitState(m);
}

const QubitChannel kExampleI = QubitChannel::canonical(
    {-0.12, 0.047, -0.210}, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.5});
const QubitChannel kExampleII = QubitChannel::canonical({0.28, 0.01, -0.1}, {0.7, 0.71, 0.7});

}  // namespace

TEST_CASE("state validation") {
    CMat4 bad;
    bad(0, 0) = 1.0;
    bad(0, 1) = 0.5;  // non-Hermitian
    CHECK_THROWS_AS(TwoQubitState{bad}, std::invalid_argument);

    CMat4 neg;
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(TwoQubitState{neg}, std::invalid_argument);

    CMat4 tr2 = CMat4::identity();
    CHECK_THROWS_AS(TwoQubitState{tr2}, std::invalid_argument);
}

TEST_CASE("correlation tensors of reference states") {
    const CorrelationTensors bell = correlation_tensors(phi_plus());
    CHECK(norm(bell.r) < 1e-15);
    CHECK(norm(bell.s) < 1e-15);
    CHECK(bell.T(0, 0) == doctest::Approx(1.0));
    CHECK(bell.T(1, 1) == doctest::Approx(-1.0));
    CHECK(bell.T(2, 2) == doctest::Approx(1.0));
    CHECK(std::fabs(bell.T(0, 1)) < 1e-15);

    const CorrelationTensors mixed =
        correlation_tensors(TwoQubitState(0.25 * CMat4::identity()));
    CHECK(mixed.R.max_abs() == doctest::Approx(1.0));  // only R00 = 1 survives
    CHECK(norm(mixed.r) == 0.0);
    CHECK(norm(mixed.s) == 0.0);
    CHECK(mixed.T.max_abs() == 0.0);

    RngStream rng(5);
    const QubitChannel ch = testutil::random_cp_channel(rng);
    const CorrelationTensors choi = correlation_tensors(choi_state(ch));
    for (int i = 0; i < 3; ++i) {
        CHECK(choi.s[i] == doctest::Approx(ch.t[i]).epsilon(1e-12));
        CHECK(std::fabs(choi.r[i]) < 1e-12);
    }
    CHECK(choi.T(0, 0) == doctest::Approx(ch.lambda[0]));
    CHECK(choi.T(1, 1) == doctest::Approx(-ch.lambda[1]));
    CHECK(choi.T(2, 2) == doctest::Approx(ch.lambda[2]));
}

TEST_CASE("tensor round trip reconstructs the state") {
    RngStream rng(9);
    for (int i = 0; i < 30; ++i) {
        const TwoQubitState s = testutil::random_state(rng);
        const TwoQubitState back = state_from_tensors(correlation_tensors(s));
        CHECK((back.rho() - s.rho()).max_abs() < 1e-10);
    }
}

TEST_CASE("tensor entries stay in [-1, 1]") {
    RngStream rng(10);
    for (int i = 0; i < 50; ++i) {
        const CorrelationTensors ct = correlation_tensors(testutil::random_state(rng));
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) CHECK(std::fabs(ct.R(a, b)) <= 1.0 + 1e-9);
    }
}

TEST_CASE("horodecki M on reference states") {
    CHECK(horodecki_M(singlet()) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(horodecki_M(p00()) == doctest::Approx(1.0).epsilon(1e-14));

    const double m1 = m_value_of_spec(kExampleI, PureInputSpec{0.4, {1.2, 1.4, 3.5}});
    CHECK(m1 == doctest::Approx(1.01094).epsilon(1e-4));
    const double m2 = m_value_of_spec(kExampleII, PureInputSpec{0.45, {0, 0, 0}});
    CHECK(m2 == doctest::Approx(1.0159).epsilon(1e-4));
}

TEST_CASE("brute-force CHSH matches the Horodecki value") {
    CHECK(chsh_bruteforce(singlet()) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-3));
    CHECK(chsh_bruteforce(p00()) == doctest::Approx(2.0).epsilon(1e-3));

    RngStream rng(13);
    for (int i = 0; i < 10; ++i) {
        const TwoQubitState s = testutil::random_state(rng);
        CHECK(std::fabs(chsh_bruteforce(s) - 2.0 * std::sqrt(horodecki_M(s))) < 1e-3);
    }
    CHECK_THROWS_AS(chsh_bruteforce(singlet(), ChshGrid{1, false}), std::invalid_argument);
}

TEST_CASE("brute-force result dominates explicit Bell-operator witnesses") {
    // tr(rho B) for any concrete settings can never beat the search result
    RngStream rng(131);
    auto unit = [](double th, double ph) {
        return Vec3{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    };
    for (int i = 0; i < 10; ++i) {
        const TwoQubitState s = testutil::random_state(rng);
        const double best = chsh_bruteforce(s);
        for (int k = 0; k < 50; ++k) {
            const Vec3 a = unit(rng.uniform(0, M_PI), rng.uniform(0, 2 * M_PI));
            const Vec3 ap = unit(rng.uniform(0, M_PI), rng.uniform(0, 2 * M_PI));
            const Vec3 b = unit(rng.uniform(0, M_PI), rng.uniform(0, 2 * M_PI));
            const Vec3 bp = unit(rng.uniform(0, M_PI), rng.uniform(0, 2 * M_PI));
            auto dot_sigma = [](const Vec3& v) {
                CMat2 m;
                for (int j = 0; j < 3; ++j) m = m + v[j] * pauli(j + 1);
                return m;
            };
            const CMat4 bell =
                kron(dot_sigma(a), dot_sigma({b[0] + bp[0], b[1] + bp[1], b[2] + bp[2]})) +
                kron(dot_sigma(ap), dot_sigma({b[0] - bp[0], b[1] - bp[1], b[2] - bp[2]}));
            cplx tr = 0.0;
            for (int p = 0; p < 4; ++p)
                for (int q = 0; q < 4; ++q) tr += s.rho()(p, q) * bell(q, p);
            CHECK(tr.real() <= best + 1e-9);
        }
    }
}

TEST_CASE("apply_filter") {
    RngStream rng(19);
    const TwoQubitState s = testutil::random_state(rng);
    const TwoQubitState same = apply_filter(s, Filter{});
    CHECK((same.rho() - s.rho()).max_abs() < 1e-12);

    // W_lambda V^t on the Choi state equals the channel output on the
    // corresponding pure state (up to the dropped local unitary): equal M
    const QubitChannel ch = testutil::random_cp_channel(rng);
    const PureInputSpec spec =
        PureInputSpec::wrapped(0.3, {rng.uniform(0, 2 * M_PI), rng.uniform(0, 2 * M_PI),
                                     rng.uniform(0, 2 * M_PI)});
    Filter f;
    CMat2 w;
    w(0, 0) = std::sqrt(spec.schmidt_lambda);
    w(1, 1) = std::sqrt(1.0 - spec.schmidt_lambda);
    f.a = w * su2_of_euler(spec.euler[0], spec.euler[1], spec.euler[2]);
    const TwoQubitState filtered = apply_filter(choi_state(ch), f);
    CHECK(horodecki_M(filtered) == doctest::Approx(m_value_of_spec(ch, spec)).epsilon(1e-10));

    // annihilating filter
    Filter kill;
    kill.a = CMat2{};
    kill.a(0, 0) = 1.0;  // projector onto |0>
    kill.b = CMat2{};
    kill.b(0, 0) = 1.0;
    CMat4 p11;
    p11(3, 3) = 1.0;
    CHECK_THROWS_AS(apply_filter(TwoQubitState(p11), kill), std::domain_error);
}

TEST_CASE("lorentz transform of filters") {
    const RMat4 id = lorentz_of_filter(CMat2::identity());
    CHECK((id - RMat4::identity()).max_abs() < 1e-14);

    // diagonal boost mixes rows 0 and 3
    CMat2 boost;
    boost(0, 0) = std::sqrt(2.0);
    boost(1, 1) = 1.0 / std::sqrt(2.0);
    const RMat4 l = lorentz_of_filter(boost);
    RMat4 mink;
    mink(0, 0) = 1.0;
    mink(1, 1) = mink(2, 2) = mink(3, 3) = -1.0;
    CHECK((l.transpose() * mink * l - mink).max_abs() < 1e-9);
    CHECK(std::fabs(l(0, 3)) > 0.1);
    CHECK(std::fabs(l(0, 1)) < 1e-12);

    // SU(2) filters give pure rotations
    RngStream rng(29);
    const RMat4 rot = lorentz_of_filter(testutil::random_su2(rng));
    CHECK(rot(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 1; i < 4; ++i) {
        CHECK(std::fabs(rot(0, i)) < 1e-12);
        CHECK(std::fabs(rot(i, 0)) < 1e-12);
    }

    CHECK_THROWS_AS(lorentz_of_filter(CMat2{}), std::domain_error);
}

TEST_CASE("filter covariance of the R matrix") {
    RngStream rng(53);
    for (int i = 0; i < 50; ++i) {
        const TwoQubitState s = testutil::random_state(rng);
        const CMat2 a = testutil::random_filter(rng);
        const CMat2 b = testutil::random_filter(rng);
        const CMat4 op = kron(a, b);
        const CMat4 unnorm = op * s.rho() * op.adjoint();
        const double tr = unnorm.trace().real();

        const RMat4 got = correlation_tensors(TwoQubitState((1.0 / tr) * unnorm)).R;
        const RMat4 want = lorentz_of_filter(a) * correlation_tensors(s).R *
                           lorentz_of_filter(b).transpose();
        const double scale = std::abs(det2(a)) * std::abs(det2(b));
        double dev = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = 0; q < 4; ++q)
                dev = std::max(dev, std::fabs(tr * got(p, q) - scale * want(p, q)));
        CHECK(dev < 1e-9);
    }
}

TEST_CASE("c spectrum of reference states") {
    const CSpectrum cs = c_spectrum(singlet());
    for (double v : cs.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cs.ratio == doctest::Approx(2.0).epsilon(1e-12));

    for (double p : {0.1, 0.5, 0.9}) {
        const CSpectrum ad = c_spectrum(choi_state(amplitude_damping(p)));
        for (double v : ad.values) CHECK(std::fabs(v - (1.0 - p)) < 1e-10);
    }

    for (double q : {0.2, 0.6236}) {
        const CSpectrum qf = c_spectrum(choi_state(genuine_hidden_family(q)));
        CHECK(std::fabs(qf.values[0] - q) < 1e-10);
        CHECK(std::fabs(qf.values[1] - q) < 1e-10);
        CHECK(std::fabs(qf.values[2] - q * q) < 1e-10);
        CHECK(std::fabs(qf.values[3] - q * q) < 1e-10);
    }
}

TEST_CASE("c spectrum ratios are filter invariant") {
    RngStream rng(59);
    for (int i = 0; i < 50; ++i) {
        const TwoQubitState s = testutil::random_state(rng);
        const Filter f{testutil::random_filter(rng), testutil::random_filter(rng)};
        const CSpectrum c0 = c_spectrum(s);
        const CSpectrum c1 = c_spectrum(apply_filter(s, f));
        for (int k = 1; k < 4; ++k)
            CHECK(std::fabs(c1.values[k] / c1.values[0] - c0.values[k] / c0.values[0]) < 1e-8);
    }
}

TEST_CASE("local unitaries preserve M and the C spectrum") {
    RngStream rng(61);
    for (int i = 0; i < 30; ++i) {
        const TwoQubitState s = testutil::random_state(rng);
        const CMat4 op = kron(testutil::random_su2(rng), testutil::random_su2(rng));
        const TwoQubitState rotated = TwoQubitState(op * s.rho() * op.adjoint());
        CHECK(std::fabs(horodecki_M(rotated) - horodecki_M(s)) < 1e-10);
        const CSpectrum c0 = c_spectrum(s), c1 = c_spectrum(rotated);
        for (int k = 0; k < 4; ++k) CHECK(std::fabs(c0.values[k] - c1.values[k]) < 1e-10);
    }
}

TEST_CASE("hidden nonlocality") {
    for (double p : {0.0, 0.3, 0.7, 0.95}) {
        const auto h = hidden_nonlocality(choi_state(amplitude_damping(p)));
        CHECK(h.violates);
        CHECK(h.optimal_violation == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    }

    const auto q5 = hidden_nonlocality(choi_state(genuine_hidden_family(0.5)));
    CHECK(q5.violates);
    CHECK(q5.optimal_violation == doctest::Approx(2.0 * std::sqrt(1.5)).epsilon(1e-9));

    const auto prod = hidden_nonlocality(p00());
    CHECK_FALSE(prod.violates);
    CHECK(prod.optimal_violation == 0.0);

    // extremal channels: ratio = 1 + cos^2 v / cos^2 u
    RngStream rng(67);
    for (int i = 0; i < 100; ++i) {
        const double u = rng.uniform(0.0, 1.2);
        const double v = rng.uniform(u + 1e-3, 1.55);
        if (std::cos(u) <= std::cos(v) || std::cos(v) <= 0.0) continue;
        const CSpectrum cs = c_spectrum(choi_state(extremal_channel(u, v)));
        const double want = 1.0 + std::pow(std::cos(v) / std::cos(u), 2);
        CHECK(std::fabs(cs.ratio - want) < 1e-9);
    }
}

TEST_CASE("state json round trip") {
    RngStream rng(137);
    const TwoQubitState s = testutil::random_state(rng);
    const json j = state_to_json(s);
    CHECK(j["rho"].size() == 16);
    const TwoQubitState back = state_from_json(j);
    CHECK((back.rho() - s.rho()).max_abs() == 0.0);

    CHECK_THROWS_AS(state_from_json(json::parse("{\"rho\": [[1, 0]]}")),
                    std::invalid_argument);
}

TEST_CASE("filtering never lowers the optimum below the direct violation") {
    RngStream rng(71);
    int tested = 0;
    while (tested < 40) {
        const TwoQubitState s = testutil::random_state(rng);
        const double m = horodecki_M(s);
        if (m <= 1.0) continue;
        ++tested;
        CHECK(hidden_nonlocality(s).optimal_violation >= 2.0 * std::sqrt(m) - 1e-9);
    }
}
