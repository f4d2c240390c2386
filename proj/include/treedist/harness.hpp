#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "treedist/engine.hpp"

namespace treedist {

/// Deterministic splitmix64 generator. Used instead of <random>
/// distributions so seeded outputs are identical across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, n); n must be positive.
    std::uint64_t below(std::uint64_t n) { return next() % n; }

    /// Uniform in [lo, hi] inclusive.
    int range(int lo, int hi) { return lo + static_cast<int>(below(hi - lo + 1)); }

private:
    std::uint64_t state_;
};

/// Label for index i: a, b, ..., z, then x26, x27, ...
std::string label_name(int i);

/// Random tree by uniform parent attachment among nodes that still have
/// capacity. max_degree 0 means unbounded. Throws on impossible
/// combinations (max_degree < 1 with more than one node).
Tree random_tree(Rng& rng, int nodes, int max_degree, int label_count);

/// Reads a dataset that is either one bracket tree per nonempty line or a
/// CSLOGS file; the format is sniffed from the first nonempty line (all
/// integer tokens means CSLOGS). Sets *format_out to "bracket" or "cslogs".
std::vector<Tree> load_dataset(std::istream& in, std::string* format_out = nullptr);

struct BatchOptions {
    std::vector<MappingClass> classes{MappingClass::Edit};
    std::vector<Method> methods{Method::Dp};
    int pairs_per_bucket = 100;
    int bucket_lo = 2;
    int bucket_hi = 100;
    int bucket_step = 0;  // 0: one bucket [lo, hi]
    std::uint64_t seed = 0;
    SolverConfig solver;
    int oracle_node_cap = 14;
};

/// Samples tree pairs per total-node bucket, runs every method x class on
/// them, writes one CSV row per run
/// (instance,n1,n2,class,method,distance,status,ms,nodes) and a per-bucket
/// summary table (instance count, average time, timeouts). The CSV is
/// deterministic for a fixed seed apart from the timing columns. Returns
/// the number of runs.
int run_batch(const std::vector<Tree>& trees, const CostFunction& cost, const BatchOptions& opts,
              std::ostream& csv, std::ostream& summary);

struct SelftestOptions {
    std::uint64_t seed = 1;
    int trials = 20;
};

/// Seeded property suites: metric axioms, matching vs enumeration,
/// cross-method equality on small instances, and the class chain
/// inequality. Prints one line per suite; returns the number of failures.
int run_selftest(const SelftestOptions& opts, std::ostream& out);

}  // namespace treedist
