#pragma once

#include <algorithm>
#include <array>
#include <cmath>

// Small fixed-dimension Nelder-Mead minimizer for the local refinements
// (sweep argmax polish, CHSH angle search). No restarts, no constraints;
// callers clamp inside the objective.

namespace nlb::detail {

template <int N, class F>
std::pair<std::array<double, N>, double> nelder_mead_min(
    F&& f, const std::array<double, N>& start, double step, int max_iter = 400,
    double tol = 1e-12) {
    constexpr int M = N + 1;
    std::array<std::array<double, N>, M> x;
    std::array<double, M> fx;
    x[0] = start;
    fx[0] = f(x[0]);
    for (int i = 0; i < N; ++i) {
        x[i + 1] = start;
        x[i + 1][i] += step;
        fx[i + 1] = f(x[i + 1]);
    }

    std::array<int, M> ord;
    for (int it = 0; it < max_iter; ++it) {
        for (int i = 0; i < M; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](int a, int b) { return fx[a] < fx[b]; });
        const int best = ord[0], worst = ord[M - 1], second = ord[M - 2];
        if (fx[worst] - fx[best] < tol * (std::fabs(fx[best]) + tol)) break;

        std::array<double, N> centroid{};
        for (int i = 0; i < M; ++i) {
            if (i == worst) continue;
            for (int d = 0; d < N; ++d) centroid[d] += x[i][d];
        }
        for (int d = 0; d < N; ++d) centroid[d] /= N;

        auto blend = [&](double c) {
            std::array<double, N> p;
            for (int d = 0; d < N; ++d) p[d] = centroid[d] + c * (centroid[d] - x[worst][d]);
            return p;
        };

        const auto refl = blend(1.0);
        const double frefl = f(refl);
        if (frefl < fx[ord[0]]) {
            const auto expd = blend(2.0);
            const double fexpd = f(expd);
            if (fexpd < frefl) {
                x[worst] = expd;
                fx[worst] = fexpd;
            } else {
                x[worst] = refl;
                fx[worst] = frefl;
            }
        } else if (frefl < fx[second]) {
            x[worst] = refl;
            fx[worst] = frefl;
        } else {
            const auto contr = blend(frefl < fx[worst] ? 0.5 : -0.5);
            const double fcontr = f(contr);
            if (fcontr < std::min(frefl, fx[worst])) {
                x[worst] = contr;
                fx[worst] = fcontr;
            } else {
                for (int i = 0; i < M; ++i) {
                    if (i == best) continue;
                    for (int d = 0; d < N; ++d) x[i][d] = 0.5 * (x[i][d] + x[best][d]);
                    fx[i] = f(x[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i < M; ++i)
        if (fx[i] < fx[best]) best = i;
    return {x[best], fx[best]};
}

}  // namespace nlb::detail
