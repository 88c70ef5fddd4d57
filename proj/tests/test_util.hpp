#pragma once

#include "diytab/raster.hpp"
#include "oracles.hpp"

inline oracle::Grid to_grid(const diytab::BinaryMask& m) {
    oracle::Grid g(m.width(), m.height());
    for (std::size_t i = 0; i < g.v.size(); ++i) g.v[i] = m.bits()[i];
    return g;
}

inline diytab::BinaryMask to_mask(const oracle::Grid& g) {
    diytab::BinaryMask m(g.w, g.h);
    for (std::size_t i = 0; i < g.v.size(); ++i) m.bits()[i] = g.v[i];
    return m;
}

inline diytab::Raster random_gray(int w, int h, std::mt19937_64& rng) {
    diytab::Raster r(w, h, 1);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& v : r.data()) v = static_cast<std::uint8_t>(d(rng));
    return r;
}

#include "diytab/quad.hpp"

/// A random strictly convex quad: jittered corners of a box, in TL,TR,BR,BL order.
inline diytab::OrderedQuad random_convex_quad(std::mt19937_64& rng, double scale = 640.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        const double cx = scale * (0.3 + 0.4 * u(rng)), cy = scale * (0.3 + 0.4 * u(rng));
        const double rx = scale * (0.1 + 0.2 * u(rng)), ry = scale * (0.1 + 0.2 * u(rng));
        auto jit = [&] { return (u(rng) - 0.5) * 0.8; };
        diytab::OrderedQuad q{{cx - rx * (1 + jit()), cy - ry * (1 + jit())},
                              {cx + rx * (1 + jit()), cy - ry * (1 + jit())},
                              {cx + rx * (1 + jit()), cy + ry * (1 + jit())},
                              {cx - rx * (1 + jit()), cy + ry * (1 + jit())}};
        if (diytab::is_strictly_convex(q)) return q;
    }
}
