#include <doctest.h>

#include <cmath>

#include "nlb/channel.hpp"
#include "nlb/json_io.hpp"
#include "nlb/nlbreak.hpp"
#include "nlb/state.hpp"
#include "test_util.hpp"

using namespace nlb;

namespace {

const QubitChannel kExampleI = QubitChannel::canonical(
    {-0.12, 0.047, -0.210}, {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.5});

TwoQubitState phi_plus() {
    CMat4 m;
    m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
    return TwoQubitState(m);
}

}  // namespace

TEST_CASE("transfer matrix of canonical channels") {
    CHECK((transfer_matrix(QubitChannel::identity()).m - RMat4::identity()).max_abs() == 0.0);

    const RMat4 dep = transfer_matrix(QubitChannel::depolarizing()).m;
    CHECK(dep(0, 0) == 1.0);
    double rest = 0.0;
    for (int i = 1; i < 4; ++i)
        for (int j = 0; j < 4; ++j) rest += std::fabs(dep(i, j));
    CHECK(rest == 0.0);

    const double p = 0.3;
    const RMat4 ad = transfer_matrix(amplitude_damping(p)).m;
    const double s = std::sqrt(1.0 - p);
    CHECK(ad(0, 0) == 1.0);
    CHECK(ad(1, 1) == doctest::Approx(s));
    CHECK(ad(2, 2) == doctest::Approx(s));
    CHECK(ad(3, 3) == doctest::Approx(1.0 - p));
    CHECK(ad(3, 0) == doctest::Approx(p));
    CHECK(ad(1, 0) == 0.0);
    CHECK(ad(2, 0) == 0.0);
}

TEST_CASE("transfer matrix with pre/post unitaries stacks rotation blocks") {
    RngStream rng(17);
    QubitChannel ch = QubitChannel::canonical({0.1, -0.2, 0.05}, {0.5, 0.4, 0.3});
    ch.pre_unitary = testutil::random_su2(rng);
    ch.post_unitary = testutil::random_su2(rng);
    const RMat4 m = transfer_matrix(ch).m;
    CHECK(m(0, 0) == 1.0);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(0, 2) == 0.0);
    CHECK(m(0, 3) == 0.0);

    // the affine action must agree with conjugating the density matrix
    const std::array<double, 4> in{1.0, 0.3, -0.5, 0.7};
    const auto out = apply_to_bloch(ch, in);
    // build rho, map through unitaries and the canonical channel by hand
    CMat2 rho;
    rho(0, 0) = 0.5 * (1.0 + in[3]);
    rho(1, 1) = 0.5 * (1.0 - in[3]);
    rho(0, 1) = 0.5 * cplx(in[1], -in[2]);
    rho(1, 0) = std::conj(rho(0, 1));
    CMat2 r1 = (*ch.pre_unitary) * rho * ch.pre_unitary->adjoint();
    // canonical action on Bloch components
    const double x = 2.0 * r1(0, 1).real(), y = -2.0 * r1(0, 1).imag();
    const double z = (r1(0, 0) - r1(1, 1)).real();
    CMat2 r2;
    const double xb = ch.t[0] + ch.lambda[0] * x;
    const double yb = ch.t[1] + ch.lambda[1] * y;
    const double zb = ch.t[2] + ch.lambda[2] * z;
    r2(0, 0) = 0.5 * (1.0 + zb);
    r2(1, 1) = 0.5 * (1.0 - zb);
    r2(0, 1) = 0.5 * cplx(xb, -yb);
    r2(1, 0) = std::conj(r2(0, 1));
    const CMat2 r3 = (*ch.post_unitary) * r2 * ch.post_unitary->adjoint();
    CHECK(out[1] == doctest::Approx(2.0 * r3(0, 1).real()).epsilon(1e-12));
    CHECK(out[2] == doctest::Approx(-2.0 * r3(0, 1).imag()).epsilon(1e-12));
    CHECK(out[3] == doctest::Approx((r3(0, 0) - r3(1, 1)).real()).epsilon(1e-12));
}

TEST_CASE("apply_to_bloch") {
    const std::array<double, 4> v{1.0, 0.2, -0.4, 0.6};
    CHECK(apply_to_bloch(QubitChannel::identity(), v) == v);

    const auto dep = apply_to_bloch(QubitChannel::depolarizing(), {1.0, 1.0, 0.0, 0.0});
    CHECK(dep == std::array<double, 4>{1.0, 0.0, 0.0, 0.0});

    const auto fixed = apply_to_bloch(amplitude_damping(1.0), v);
    CHECK(fixed[0] == 1.0);
    CHECK(fixed[1] == doctest::Approx(0.0));
    CHECK(fixed[2] == doctest::Approx(0.0));
    CHECK(fixed[3] == doctest::Approx(1.0));

    CHECK_THROWS_AS(apply_to_bloch(QubitChannel::identity(), {0.5, 0, 0, 0}),
                    std::invalid_argument);
}

TEST_CASE("choi states of the standard channels") {
    const TwoQubitState id = choi_state(QubitChannel::identity());
    CHECK((id.rho() - phi_plus().rho()).max_abs() < 1e-15);

    const TwoQubitState dep = choi_state(QubitChannel::depolarizing());
    CHECK((dep.rho() - 0.25 * CMat4::identity()).max_abs() < 1e-15);

    const double p = 0.37;
    const TwoQubitState ad = choi_state(amplitude_damping(p));
    CMat4 want;
    const double s = std::sqrt(1.0 - p);
    want(0, 0) = 0.5;
    want(0, 3) = want(3, 0) = 0.5 * s;
    want(2, 2) = 0.5 * p;
    want(3, 3) = 0.5 * (1.0 - p);
    CHECK((ad.rho() - want).max_abs() < 1e-15);
}

TEST_CASE("choi reduced state on the untouched side is maximally mixed") {
    RngStream rng(23);
    for (int i = 0; i < 30; ++i) {
        const QubitChannel ch = testutil::random_cp_channel(rng);
        CMat2 red = partial_trace_second(choi_state(ch).rho());
        red(0, 0) -= 0.5;
        red(1, 1) -= 0.5;
        CHECK(red.max_abs() < 1e-10);
    }
}

TEST_CASE("complete positivity") {
    CHECK(is_completely_positive(QubitChannel::identity()));
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) CHECK(is_completely_positive(amplitude_damping(p)));

    // transpose-like map: positive but not completely positive
    const QubitChannel tr = QubitChannel::canonical({0, 0, 0}, {1, 1, -1});
    CHECK_FALSE(is_completely_positive(tr));
    // direct eigenvalue witness
    CHECK(min_eig_hermitian(choi_matrix_unchecked(tr)) < -1e-3);
    CHECK_THROWS_AS(choi_state(tr), std::domain_error);

    // the same verdict with unitaries attached (non-canonical path)
    RngStream urng(53);
    QubitChannel tr2 = tr;
    tr2.pre_unitary = testutil::random_su2(urng);
    tr2.post_unitary = testutil::random_su2(urng);
    CHECK_FALSE(is_completely_positive(tr2));
    QubitChannel ok = amplitude_damping(0.4);
    ok.post_unitary = testutil::random_su2(urng);
    CHECK(is_completely_positive(ok));
}

TEST_CASE("cp verdict equals the sign of the minimal Choi eigenvalue") {
    RngStream rng(31);
    for (int i = 0; i < 10000; ++i) {
        const Vec3 t{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Vec3 l{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const QubitChannel ch = QubitChannel::canonical(t, l);
        const double me = min_eig_hermitian(choi_matrix_unchecked(ch));
        CHECK(is_completely_positive(ch) == (me >= -1e-10));
    }
}

TEST_CASE("unitality") {
    CHECK(is_unital(QubitChannel::identity()));
    CHECK_FALSE(is_unital(amplitude_damping(0.5)));
    CHECK_FALSE(is_unital(kExampleI));
}

TEST_CASE("entanglement breaking") {
    CHECK(is_entanglement_breaking(QubitChannel::depolarizing()));
    CHECK_FALSE(is_entanglement_breaking(QubitChannel::identity()));
    CHECK_FALSE(is_entanglement_breaking(amplitude_damping(0.9)));
}

TEST_CASE("apply_one_sided") {
    RngStream rng(37);
    const TwoQubitState phi = phi_plus();

    // identity leaves states alone
    const TwoQubitState s0 = testutil::random_state(rng);
    CHECK((apply_one_sided(QubitChannel::identity(), s0).rho() - s0.rho()).max_abs() < 1e-12);

    // acting on |Phi+> reproduces the Choi state
    for (int i = 0; i < 20; ++i) {
        const QubitChannel ch = testutil::random_cp_channel(rng);
        CHECK((apply_one_sided(ch, phi).rho() - choi_state(ch).rho()).max_abs() < 1e-12);
    }

    // amplitude damping on a Schmidt state: diagonal T with the published entries
    const double p = 0.42, lam = 0.3;
    CMat4 pure;
    const double a = std::sqrt(lam), b = std::sqrt(1.0 - lam);
    pure(0, 0) = a * a;
    pure(0, 3) = pure(3, 0) = a * b;
    pure(3, 3) = b * b;
    const TwoQubitState out = apply_one_sided(amplitude_damping(p), TwoQubitState(pure));
    const CorrelationTensors ct = correlation_tensors(out);
    const double t11 = 2.0 * std::sqrt(lam * (1.0 - lam) * (1.0 - p));
    CHECK(ct.T(0, 0) == doctest::Approx(t11).epsilon(1e-12));
    CHECK(ct.T(1, 1) == doctest::Approx(-t11).epsilon(1e-12));
    CHECK(ct.T(2, 2) == doctest::Approx(lam + (1.0 - lam) * (1.0 - 2.0 * p)).epsilon(1e-12));
    CHECK(std::fabs(ct.T(0, 1)) < 1e-14);
    CHECK(std::fabs(ct.T(1, 2)) < 1e-14);
}

TEST_CASE("compose") {
    RngStream rng(41);
    const QubitChannel ch = testutil::random_cp_channel(rng);
    CHECK((compose(QubitChannel::identity(), ch).m - transfer_matrix(ch).m).max_abs() < 1e-15);

    const RMat4 dep = compose(QubitChannel::depolarizing(), ch).m;
    CHECK((dep - transfer_matrix(QubitChannel::depolarizing()).m).max_abs() < 1e-15);

    // amplitude damping composes as p + q - pq
    const double p = 0.3, q = 0.45;
    const RMat4 lhs = compose(amplitude_damping(p), amplitude_damping(q)).m;
    const RMat4 rhs = transfer_matrix(amplitude_damping(p + q - p * q)).m;
    CHECK((lhs - rhs).max_abs() < 1e-14);

    // composed transfer matrix equals sequential application
    for (int i = 0; i < 20; ++i) {
        const QubitChannel c1 = testutil::random_cp_channel(rng);
        const QubitChannel c2 = testutil::random_cp_channel(rng);
        const RMat4 m = compose(c2, c1).m;
        const std::array<double, 4> v{1.0, rng.uniform(-1, 1) * 0.5, rng.uniform(-1, 1) * 0.5,
                                      rng.uniform(-1, 1) * 0.5};
        const auto seq = apply_to_bloch(c2, apply_to_bloch(c1, v));
        std::array<double, 4> direct{};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) direct[r] += m(r, c) * v[c];
        for (int r = 0; r < 4; ++r) CHECK(direct[r] == doctest::Approx(seq[r]).epsilon(1e-12));
        CHECK(m(0, 0) == 1.0);
        CHECK(m(0, 1) == 0.0);
    }
}

TEST_CASE("channel json round trip") {
    RngStream rng(43);
    QubitChannel ch = testutil::random_cp_channel(rng);
    const QubitChannel back = channel_from_json(channel_to_json(ch));
    CHECK(back.t == ch.t);
    CHECK(back.lambda == ch.lambda);
    CHECK_FALSE(back.pre_unitary.has_value());

    ch.pre_unitary = testutil::random_su2(rng);
    ch.post_unitary = testutil::random_su2(rng);
    const QubitChannel back2 = channel_from_json(channel_to_json(ch));
    REQUIRE(back2.pre_unitary.has_value());
    CHECK((*back2.pre_unitary - *ch.pre_unitary).max_abs() == 0.0);
    CHECK((*back2.post_unitary - *ch.post_unitary).max_abs() == 0.0);

    CHECK_THROWS_AS(channel_from_json(json::parse("{\"t\":[1,2]}")), std::invalid_argument);
}
