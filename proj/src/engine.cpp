// engine.cpp

#include "nfsieve/engine.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <thread>

namespace nfsieve {

std::string_view to_string(Algorithm alg) {
    switch (alg) {
    case Algorithm::trivial: return "trivial";
    case Algorithm::classical: return "classical";
    case Algorithm::improved: return "improved";
    }
    return "unknown";
}

SieveTable::SieveTable(unsigned long u) : u_(u), entries_(u * (2 * u + 1)) {
    if (u < 1) throw std::invalid_argument("SieveTable: u must be positive");
}

std::size_t SieveTable::index(unsigned long b, long a) const {
    const long su = static_cast<long>(u_);
    if (b < 1 || b > u_ || a < -su || a > su)
        throw std::out_of_range("SieveTable: (" + std::to_string(b) + ", " + std::to_string(a) + ") outside region");
    return (b - 1) * width() + static_cast<std::size_t>(a + su);
}

std::size_t SieveTable::nonzero_count() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const Integer& x) { return x != 0; }));
}

SieveTable build_table(const SievePolynomial& f, unsigned long u) {
    SieveTable table(u);
    const NormForm F = norm_form(f);
    const long su = static_cast<long>(u);
    Integer a_z, b_z;
    for (unsigned long b = 1; b <= u; ++b) {
        b_z = b;
        for (long a = -su; a <= su; ++a) {
            if (gcd(a, static_cast<long>(b)) != 1) continue;
            a_z = a;
            // zero products stay 0 and are skipped by the sieves
            table.at(b, a) = (a_z - b_z * f.m()) * eval_norm(F, a_z, b_z);
        }
    }
    return table;
}

bool residuals_coprime(const SieveTable& table, const PrimeList& primes) {
    for (unsigned long b = 1; b <= table.u(); ++b) {
        for (const Integer& x : table.row(b)) {
            if (x == 0) continue;
            for (Prime l : primes)
                if (mpz_divisible_ui_p(x.get_mpz_t(), l)) return false;
        }
    }
    return true;
}

Attempts& Attempts::operator+=(const Attempts& o) {
    rational += o.rational;
    algebraic_simple += o.algebraic_simple;
    algebraic_multiple += o.algebraic_multiple;
    untargeted += o.untargeted;
    return *this;
}

Attempts CostLedger::get(unsigned long b, Prime l) const {
    auto it = cells_.find({b, l});
    return it == cells_.end() ? Attempts{} : it->second;
}

CostLedger& CostLedger::merge(const CostLedger& other) {
    for (const auto& [key, cell] : other.cells_) cells_[key] += cell;
    return *this;
}

Attempts CostLedger::total() const {
    Attempts sum;
    for (const auto& [key, cell] : cells_) sum += cell;
    return sum;
}

namespace {

// Calls fn(a) for a in [-u, u] with a = residue (mod q), ascending.
template <class Fn>
void for_each_in_progression(long u, const Integer& residue, const Integer& q, Fn&& fn) {
    const Integer offset = mod_floor(residue + u, q);
    if (offset > 2 * u) return;
    long a = offset.get_si() - u;
    if (q > 2 * u) {
        fn(a);
        return;
    }
    const long step = q.get_si();
    for (; a <= u; a += step) fn(a);
}

// while (l | x) x /= l; returns the number of tests made.
std::uint64_t divide_out(Integer& x, Prime l) {
    std::uint64_t tests = 1;
    while (mpz_divisible_ui_p(x.get_mpz_t(), l)) {
        mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), l);
        ++tests;
    }
    return tests;
}

// x /= l without a test. The improved sieve only issues these where l is known
// to divide; anything else is a bug in the ladders or the table.
void divide_once(Integer& x, Prime l, unsigned long b, long a) {
    if (mpz_tdiv_q_ui(x.get_mpz_t(), x.get_mpz_t(), l) != 0) {
        throw InvariantViolation("unconditional division by " + std::to_string(l) + " missed at (b=" +
                                 std::to_string(b) + ", a=" + std::to_string(a) + ")");
    }
}

template <class RowFn>
CostLedger sieve_rows(SieveTable& table, const SieveOptions& opts, RowFn&& row_fn) {
    const unsigned long u = table.u();
    const unsigned workers = std::max(1u, std::min<unsigned>(opts.workers, static_cast<unsigned>(u)));
    if (workers == 1) {
        CostLedger ledger;
        for (unsigned long b = 1; b <= u; ++b) row_fn(b, ledger);
        return ledger;
    }

    std::vector<CostLedger> ledgers(workers);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (unsigned long b = 1 + w; b <= u; b += workers) row_fn(b, ledgers[w]);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    CostLedger merged;
    for (const auto& l : ledgers) merged.merge(l);
    return merged;
}

} // namespace

SieveOutcome sieve_trivial(SieveTable table, const PrimeList& primes, const SieveOptions& opts) {
    const long u = static_cast<long>(table.u());
    CostLedger ledger = sieve_rows(table, opts, [&](unsigned long b, CostLedger& out) {
        for (Prime l : primes) {
            Attempts& cell = out.cell(b, l);
            for (long a = -u; a <= u; ++a) {
                Integer& x = table.at(b, a);
                if (x != 0) cell.untargeted += divide_out(x, l);
            }
        }
    });
    return {Algorithm::trivial, std::move(table), std::move(ledger), {}};
}

SieveOutcome sieve_classical(SieveTable table, const SievePolynomial& f, const LiftTables& tables,
                             const SieveOptions& opts) {
    const long u = static_cast<long>(table.u());

    // Level-1 data only: m mod l and every root of f mod l.
    struct PrimeData {
        Prime l;
        Integer m_residue;
        std::vector<std::pair<Prime, bool>> roots; // (root, is_simple), ascending
    };
    std::vector<PrimeData> data;
    PrecomputeStats pre;
    for (const PrimeLadder& lad : tables.ladders()) {
        PrimeData pd{lad.l, mod_floor(f.m(), Integer(lad.l)), {}};
        for (Prime r : lad.roots.all_roots())
            pd.roots.emplace_back(r, std::binary_search(lad.roots.simple_roots.begin(), lad.roots.simple_roots.end(), r));
        pre.root_scan_evaluations += lad.l;
        ++pre.rational_residues;
        data.push_back(std::move(pd));
    }

    CostLedger ledger = sieve_rows(table, opts, [&](unsigned long b, CostLedger& out) {
        const Integer bz = b;
        for (const PrimeData& pd : data) {
            const Prime l = pd.l;
            if (b % l == 0) continue;
            const Integer q = l;
            Attempts& cell = out.cell(b, l);
            for_each_in_progression(u, bz * pd.m_residue, q, [&](long a) {
                Integer& x = table.at(b, a);
                if (x != 0) cell.rational += divide_out(x, l);
            });
            for (const auto& [root, simple] : pd.roots) {
                std::uint64_t& counter = simple ? cell.algebraic_simple : cell.algebraic_multiple;
                for_each_in_progression(u, bz * root, q, [&](long a) {
                    Integer& x = table.at(b, a);
                    if (x != 0) counter += divide_out(x, l);
                });
            }
        }
    });
    return {Algorithm::classical, std::move(table), std::move(ledger), pre};
}

SieveOutcome sieve_improved(SieveTable table, const LiftTables& tables, const SieveOptions& opts) {
    const long u = static_cast<long>(table.u());

    CostLedger ledger = sieve_rows(table, opts, [&](unsigned long b, CostLedger& out) {
        const Integer bz = b;
        for (const PrimeLadder& lad : tables.ladders()) {
            const Prime l = lad.l;
            if (b % l == 0) continue;
            Attempts& cell = out.cell(b, l);

            // First: l-powers of (a - bm), one level at a time.
            Integer q = 1;
            for (unsigned e = 1; e <= lad.rational_cap; ++e) {
                q *= l;
                for_each_in_progression(u, bz * lad.rational[e - 1], q, [&](long a) {
                    Integer& x = table.at(b, a);
                    if (x == 0) return;
                    divide_once(x, l, b, a);
                    ++cell.rational;
                });
            }

            // Second: l-powers of the norm on classes of simple roots.
            q = 1;
            for (unsigned e = 1; e <= lad.algebraic_cap; ++e) {
                q *= l;
                for (const Integer& root : lad.simple[e - 1]) {
                    for_each_in_progression(u, bz * root, q, [&](long a) {
                        Integer& x = table.at(b, a);
                        if (x == 0) return;
                        divide_once(x, l, b, a);
                        ++cell.algebraic_simple;
                    });
                }
            }

            // Finally: classes of multiple roots. One sure division, then
            // a while-loop only on classes that lift mod l^2.
            q = l;
            for (Prime root : lad.roots.multiple_roots) {
                for_each_in_progression(u, bz * root, q, [&](long a) {
                    Integer& x = table.at(b, a);
                    if (x == 0) return;
                    divide_once(x, l, b, a);
                    ++cell.algebraic_multiple;
                });
            }
            for (Prime root : lad.multiple_liftable) {
                for_each_in_progression(u, bz * root, q, [&](long a) {
                    Integer& x = table.at(b, a);
                    if (x != 0) cell.algebraic_multiple += divide_out(x, l);
                });
            }
        }
    });
    return {Algorithm::improved, std::move(table), std::move(ledger), tables.stats()};
}

SieveOutcome sieve_trivial(const SievePolynomial& f, unsigned long u, Prime y, const SieveOptions& opts) {
    return sieve_trivial(build_table(f, u), primes_up_to(y), opts);
}

SieveOutcome sieve_classical(const SievePolynomial& f, unsigned long u, Prime y, const SieveOptions& opts) {
    return sieve_classical(build_table(f, u), f, build_lift_tables(f, u, y), opts);
}

SieveOutcome sieve_improved(const SievePolynomial& f, unsigned long u, Prime y, const SieveOptions& opts) {
    return sieve_improved(build_table(f, u), build_lift_tables(f, u, y), opts);
}

SieveOutcome run_sieve(Algorithm alg, const SievePolynomial& f, unsigned long u, Prime y, const SieveOptions& opts) {
    switch (alg) {
    case Algorithm::trivial: return sieve_trivial(f, u, y, opts);
    case Algorithm::classical: return sieve_classical(f, u, y, opts);
    case Algorithm::improved: return sieve_improved(f, u, y, opts);
    }
    throw std::invalid_argument("unknown algorithm");
}

} // namespace nfsieve
