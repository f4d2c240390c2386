#include "treedist/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "treedist/matching.hpp"

namespace treedist {

std::string label_name(int i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "x" + std::to_string(i);
}

Tree random_tree(Rng& rng, int nodes, int max_degree, int label_count) {
    if (nodes < 1) throw std::invalid_argument("random_tree: need at least one node");
    if (label_count < 1) throw std::invalid_argument("random_tree: need at least one label");
    if (max_degree != 0 && max_degree < 1 && nodes > 1)
        throw std::invalid_argument("random_tree: impossible degree constraint");
    Tree::Builder builder;
    std::vector<NodeId> open;  // nodes with spare capacity
    std::vector<int> degree(nodes, 0);
    open.push_back(builder.add_node(Tree::kNoParent, label_name(rng.range(0, label_count - 1))));
    for (int i = 1; i < nodes; ++i) {
        NodeId parent = open[rng.below(open.size())];
        NodeId child = builder.add_node(parent, label_name(rng.range(0, label_count - 1)));
        if (max_degree > 0 && ++degree[parent] == max_degree)
            open.erase(std::find(open.begin(), open.end(), parent));
        open.push_back(child);
    }
    return std::move(builder).build();
}

std::vector<Tree> load_dataset(std::istream& in, std::string* format_out) {
    std::stringstream buffered;
    buffered << in.rdbuf();
    std::string content = buffered.str();

    // Sniff: the first nonempty line decides the format.
    bool cslogs = false;
    {
        std::istringstream lines(content);
        std::string line;
        while (std::getline(lines, line)) {
            std::istringstream ls(line);
            std::string tok;
            if (!(ls >> tok)) continue;
            cslogs = true;
            do {
                try {
                    std::size_t used = 0;
                    (void)std::stoll(tok, &used);
                    if (used != tok.size()) cslogs = false;
                } catch (const std::exception&) {
                    cslogs = false;
                }
            } while (cslogs && ls >> tok);
            break;
        }
    }
    if (format_out) *format_out = cslogs ? "cslogs" : "bracket";

    std::istringstream lines(content);
    if (cslogs) return parse_cslogs(lines);

    std::vector<Tree> trees;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        try {
            trees.push_back(parse_bracket(line));
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), lineno, true);
        }
    }
    return trees;
}

namespace {

struct BucketRuns {
    int lo, hi;  // inclusive total-node range
    std::vector<std::pair<int, int>> pairs;
};

}  // namespace

int run_batch(const std::vector<Tree>& trees, const CostFunction& cost, const BatchOptions& opts,
              std::ostream& csv, std::ostream& summary) {
    if (trees.empty()) throw std::invalid_argument("batch: empty dataset");

    std::vector<BucketRuns> buckets;
    if (opts.bucket_step <= 0) {
        buckets.push_back({opts.bucket_lo, opts.bucket_hi, {}});
    } else {
        for (int lo = opts.bucket_lo; lo < opts.bucket_hi; lo += opts.bucket_step)
            buckets.push_back({lo, std::min(opts.bucket_hi, lo + opts.bucket_step) - 1, {}});
    }

    // Rejection-sample distinct pairs per bucket; deterministic in the seed.
    Rng rng(opts.seed);
    const int n = static_cast<int>(trees.size());
    for (auto& bucket : buckets) {
        std::set<std::pair<int, int>> seen;
        long long attempts = 0;
        const long long max_attempts = 2000LL * opts.pairs_per_bucket + 2000;
        while (static_cast<int>(bucket.pairs.size()) < opts.pairs_per_bucket &&
               attempts < max_attempts) {
            ++attempts;
            int i = static_cast<int>(rng.below(n));
            int j = static_cast<int>(rng.below(n));
            int total = trees[i].size() + trees[j].size();
            if (total < bucket.lo || total > bucket.hi) continue;
            if (!seen.insert({i, j}).second) continue;
            bucket.pairs.emplace_back(i, j);
        }
    }

    csv << "instance,n1,n2,class,method,distance,status,ms,nodes\n";
    struct Agg {
        int runs = 0, timeouts = 0;
        double total_ms = 0;
    };
    std::map<std::tuple<std::size_t, std::string, std::string>, Agg> agg;

    int total_runs = 0;
    for (std::size_t b = 0; b < buckets.size(); ++b) {
        for (auto [i, j] : buckets[b].pairs) {
            for (MappingClass cls : opts.classes) {
                for (Method method : opts.methods) {
                    DistanceOptions dopts;
                    dopts.cls = cls;
                    dopts.method = method;
                    dopts.solver = opts.solver;
                    dopts.oracle_node_cap = opts.oracle_node_cap;
                    DistanceResult r = compute_distance(trees[i], trees[j], cost, dopts);
                    csv << i << ":" << j << "," << trees[i].size() << "," << trees[j].size()
                        << "," << to_string(cls) << "," << to_string(method) << ","
                        << format_scaled(r.distance, r.scale) << ","
                        << (r.exact ? "ok" : "timeout") << "," << std::fixed
                        << std::setprecision(3) << r.stats.wall_ms << ","
                        << r.stats.solver_nodes << "\n";
                    auto& a = agg[{b, to_string(cls), to_string(method)}];
                    ++a.runs;
                    a.total_ms += r.stats.wall_ms;
                    if (!r.exact) ++a.timeouts;
                    ++total_runs;
                }
            }
        }
    }

    summary << "bucket,class,method,instances,avg_ms,timeouts\n";
    for (std::size_t b = 0; b < buckets.size(); ++b) {
        for (MappingClass cls : opts.classes) {
            for (Method method : opts.methods) {
                auto it = agg.find({b, to_string(cls), to_string(method)});
                int runs = it == agg.end() ? 0 : it->second.runs;
                double avg = runs ? it->second.total_ms / runs : 0.0;
                int timeouts = it == agg.end() ? 0 : it->second.timeouts;
                summary << buckets[b].lo << "-" << buckets[b].hi << "," << to_string(cls) << ","
                        << to_string(method) << "," << runs << "," << std::fixed
                        << std::setprecision(3) << avg << "," << timeouts << "\n";
            }
        }
    }
    return total_runs;
}

namespace {

// Exhaustive matching enumeration used by the selftest; intentionally a
// separate code path from the Hungarian implementation.
struct EnumBest {
    bool have = false;
    std::int64_t value = 0;
    std::vector<std::pair<int, int>> pairs;
};

void enum_matchings(const WeightMatrix& w, int row, std::vector<int>& col_used,
                    std::vector<std::pair<int, int>>& current, std::int64_t value, bool perfect,
                    EnumBest& best) {
    if (row == w.rows()) {
        if (perfect && static_cast<int>(current.size()) != w.rows()) return;
        std::vector<std::pair<int, int>> sorted = current;
        std::sort(sorted.begin(), sorted.end());
        if (!best.have || value > best.value || (value == best.value && sorted < best.pairs)) {
            best.have = true;
            best.value = value;
            best.pairs = std::move(sorted);
        }
        return;
    }
    if (!perfect) enum_matchings(w, row + 1, col_used, current, value, perfect, best);
    for (int j = 0; j < w.cols(); ++j) {
        if (col_used[j] || w.forbidden(row, j)) continue;
        col_used[j] = 1;
        current.emplace_back(row, j);
        enum_matchings(w, row + 1, col_used, current, value + w.at(row, j), perfect, best);
        current.pop_back();
        col_used[j] = 0;
    }
}

EnumBest enumerate_best(const WeightMatrix& w, bool perfect) {
    EnumBest best;
    std::vector<int> col_used(w.cols(), 0);
    std::vector<std::pair<int, int>> current;
    enum_matchings(w, 0, col_used, current, 0, perfect, best);
    return best;
}

}  // namespace

int run_selftest(const SelftestOptions& opts, std::ostream& out) {
    int failures = 0;
    int checks = 0;
    const bool inject_fault = std::getenv("TREEDIST_SELFTEST_FAULT") != nullptr;
    auto suite = [&](const std::string& name, auto&& body) {
        if (opts.trials <= 0) return;
        std::string detail;
        bool ok = body(detail);
        ++checks;
        if (ok) {
            out << "ok   " << name << " (" << opts.trials << " trials)\n";
        } else {
            ++failures;
            out << "FAIL " << name << ": " << detail << "\n";
        }
    };

    CostFunction unit = CostFunction::unit();

    suite("metric-axioms", [&](std::string& detail) {
        std::vector<std::string> alphabet;
        for (int i = 0; i < 6; ++i) alphabet.push_back(label_name(i));
        auto violations = validate_metric(unit, alphabet);
        if (inject_fault) violations.push_back("injected fault");
        if (violations.empty()) return true;
        detail = violations.front();
        return false;
    });

    suite("matching-vs-enumeration", [&](std::string& detail) {
        Rng rng(opts.seed * 7919 + 1);
        for (int trial = 0; trial < opts.trials; ++trial) {
            int p = rng.range(1, 5), q = rng.range(1, 5);
            WeightMatrix w(p, q);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < q; ++j)
                    w.at(i, j) = rng.below(10) == 0 ? WeightMatrix::kForbidden
                                                    : static_cast<std::int64_t>(rng.below(21));
            MatchingResult got = max_weight_matching(w);
            EnumBest want = enumerate_best(w, false);
            if (got.value != want.value || got.pairs != want.pairs) {
                detail = "free matching mismatch at trial " + std::to_string(trial);
                return false;
            }
            auto bij = max_weight_bijection(w);
            EnumBest wantp = enumerate_best(w, true);
            bool feasible = p == q && wantp.have;
            if (bij.has_value() != feasible ||
                (bij && (bij->value != wantp.value || bij->pairs != wantp.pairs))) {
                detail = "bijection mismatch at trial " + std::to_string(trial);
                return false;
            }
        }
        return true;
    });

    const std::vector<MappingClass> all_classes{MappingClass::Edit, MappingClass::Segmental,
                                                MappingClass::BottomUpSegmental,
                                                MappingClass::BottomUp};

    suite("cross-method-equality", [&](std::string& detail) {
        Rng rng(opts.seed * 104729 + 2);
        for (int trial = 0; trial < opts.trials; ++trial) {
            Tree t1 = random_tree(rng, rng.range(1, 5), 0, 3);
            Tree t2 = random_tree(rng, rng.range(1, 5), 0, 3);
            for (MappingClass cls : all_classes) {
                DistanceOptions o;
                o.cls = cls;
                o.method = Method::Dp;
                CostValue dp = compute_distance(t1, t2, unit, o).distance;
                o.method = Method::Naive;
                CostValue naive = compute_distance(t1, t2, unit, o).distance;
                o.method = Method::Oracle;
                CostValue oracle = compute_distance(t1, t2, unit, o).distance;
                if (dp != naive || naive != oracle) {
                    detail = "trial " + std::to_string(trial) + " class " +
                             std::string(to_string(cls)) + ": dp=" + std::to_string(dp) +
                             " naive=" + std::to_string(naive) +
                             " oracle=" + std::to_string(oracle);
                    return false;
                }
            }
        }
        return true;
    });

    suite("class-chain-inequality", [&](std::string& detail) {
        Rng rng(opts.seed * 15485863 + 3);
        for (int trial = 0; trial < opts.trials; ++trial) {
            Tree t1 = random_tree(rng, rng.range(2, 12), 0, 3);
            Tree t2 = random_tree(rng, rng.range(2, 12), 0, 3);
            CostValue prev = -1;
            for (MappingClass cls : all_classes) {
                DistanceOptions o;
                o.cls = cls;
                DistanceResult r = compute_distance(t1, t2, unit, o);
                if (r.distance < prev) {
                    detail = "trial " + std::to_string(trial) + ": " +
                             std::string(to_string(cls)) + " smaller than previous class";
                    return false;
                }
                prev = r.distance;
            }
        }
        return true;
    });

    if (checks == 0)
        out << "0 checks run\n";
    else
        out << (failures == 0 ? "all checks passed" : "FAILURES: " + std::to_string(failures))
            << "\n";
    return failures;
}

}  // namespace treedist
