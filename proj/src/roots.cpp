// roots.cpp

#include "nfsieve/roots.hpp"

#include <algorithm>
#include <string>

namespace nfsieve {

std::vector<Prime> RootClassification::all_roots() const {
    std::vector<Prime> out;
    std::merge(simple_roots.begin(), simple_roots.end(), multiple_roots.begin(), multiple_roots.end(),
               std::back_inserter(out));
    return out;
}

RootClassification classify_roots(const Polynomial& f, Prime l) {
    RootClassification out;
    const Integer lz = l;
    for (Prime x = 0; x < l; ++x) {
        if (eval_poly(f, x, lz) != 0) continue;
        if (eval_derivative(f, x, lz) != 0)
            out.simple_roots.push_back(x);
        else
            out.multiple_roots.push_back(x);
    }
    return out;
}

namespace {

// Lifts a simple root mod l up to l^to, recording every level.
// inv is f'(root)^-1 mod l.
void lift_levels(const Polynomial& f, Prime l, Integer x, const Integer& inv, unsigned to,
                 std::vector<Integer>& levels, std::uint64_t* steps) {
    Integer modulus = l;
    levels.push_back(x);
    for (unsigned e = 2; e <= to; ++e) {
        modulus *= l;
        x = mod_floor(x - f(x) * inv, modulus);
        if (steps) ++*steps;
        levels.push_back(x);
    }
}

} // namespace

Integer hensel_lift_simple(const Polynomial& f, Prime l, Prime root, unsigned e) {
    if (root >= l) throw std::invalid_argument("hensel_lift_simple: root must be a residue mod l");
    const Integer lz = l;
    if (eval_poly(f, root, lz) != 0)
        throw NotSimpleRootError(std::to_string(root) + " is not a root mod " + std::to_string(l));
    const Integer df = eval_derivative(f, root, lz);
    if (df == 0) throw NotSimpleRootError(std::to_string(root) + " is a multiple root mod " + std::to_string(l));
    const Integer inv = mod_inverse(df, lz);
    std::vector<Integer> levels;
    lift_levels(f, l, Integer(root), inv, std::max(e, 1u), levels, nullptr);
    return levels.back();
}

bool lift_multiple_test(const Polynomial& f, Prime l, Prime root) {
    if (root >= l) throw std::invalid_argument("lift_multiple_test: root must be a residue mod l");
    const Integer lz = l;
    if (eval_poly(f, root, lz) != 0 || eval_derivative(f, root, lz) != 0)
        throw NotMultipleRootError(std::to_string(root) + " is not a multiple root mod " + std::to_string(l));
    return eval_poly(f, root, lz * lz) == 0;
}

PrecomputeStats& PrecomputeStats::operator+=(const PrecomputeStats& o) {
    root_scan_evaluations += o.root_scan_evaluations;
    hensel_steps += o.hensel_steps;
    rational_residues += o.rational_residues;
    lift_tests += o.lift_tests;
    return *this;
}

const PrimeLadder& LiftTables::at(Prime l) const {
    auto it = std::lower_bound(ladders_.begin(), ladders_.end(), l,
                               [](const PrimeLadder& p, Prime q) { return p.l < q; });
    if (it == ladders_.end() || it->l != l) throw std::out_of_range("no ladder for prime " + std::to_string(l));
    return *it;
}

LiftTables build_lift_tables(const SievePolynomial& f, unsigned long u, Prime y) {
    if (u < 1) throw std::invalid_argument("build_lift_tables: u must be positive");
    const PrimeList primes = primes_up_to(y);
    const Integer rbound = rational_bound(f, u);
    const Integer abound = algebraic_bound(f, u);

    std::vector<PrimeLadder> ladders;
    ladders.reserve(primes.size());
    PrecomputeStats stats;
    for (Prime l : primes) {
        PrimeLadder lad;
        lad.l = l;
        lad.rational_cap = max_exponent(l, rbound);
        lad.algebraic_cap = max_exponent(l, abound);

        Integer q = 1;
        for (unsigned e = 1; e <= lad.rational_cap; ++e) {
            q *= l;
            lad.rational.push_back(mod_floor(f.m(), q));
            ++stats.rational_residues;
        }

        lad.roots = classify_roots(f.poly(), l);
        stats.root_scan_evaluations += l;

        lad.simple.resize(lad.algebraic_cap);
        const Integer lz = l;
        for (Prime r : lad.roots.simple_roots) {
            const Integer inv = mod_inverse(eval_derivative(f.poly(), r, lz), lz);
            std::vector<Integer> levels;
            lift_levels(f.poly(), l, Integer(r), inv, lad.algebraic_cap, levels, &stats.hensel_steps);
            for (unsigned e = 1; e <= lad.algebraic_cap; ++e) lad.simple[e - 1].push_back(levels[e - 1]);
        }

        for (Prime r : lad.roots.multiple_roots) {
            ++stats.lift_tests;
            if (lift_multiple_test(f.poly(), l, r)) lad.multiple_liftable.push_back(r);
        }
        ladders.push_back(std::move(lad));
    }
    return LiftTables(std::move(ladders), stats);
}

} // namespace nfsieve
