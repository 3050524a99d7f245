#pragma once

#include <random>

#include "hecke.hpp"

namespace hk {

// random element of W of length at most max_len, possibly with an Omega part
inline AffElem random_affelem(const Weyl& W, std::mt19937& rng, int max_len) {
    std::uniform_int_distribution<int> len(0, max_len), gen(0, W.gens.size() - 1);
    AffElem w = W.identity();
    int l = len(rng);
    for (int k = 0; k < l; ++k) {
        AffElem y = W.compose(W.gens[gen(rng)], w);
        if (W.length(y) > W.length(w)) w = y;
    }
    if (!W.omega_gens.empty()) {
        std::uniform_int_distribution<int> og(-1, W.omega_gens.size() - 1);
        int o = og(rng);
        if (o >= 0) w = W.compose(w, W.omega_gens[o]);
    }
    return w;
}

inline HeckeElement random_element(const Hecke& H, std::mt19937& rng, int max_len, int max_terms = 3) {
    std::uniform_int_distribution<int> nt(1, max_terms), coef(-3, 3);
    HeckeElement h;
    int n = nt(rng);
    for (int k = 0; k < n; ++k) {
        int c = coef(rng);
        if (!c) c = 1;
        add_term(h, random_affelem(H.W, rng, max_len), LaurentPoly(c));
    }
    return h;
}

}  // namespace hk
