#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "treedist/harness.hpp"

namespace {

using namespace treedist;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitTimeout = 3;

MappingClass parse_class(const std::string& s) {
    if (s == "edit") return MappingClass::Edit;
    if (s == "seg") return MappingClass::Segmental;
    if (s == "botseg") return MappingClass::BottomUpSegmental;
    if (s == "bot") return MappingClass::BottomUp;
    throw CLI::ValidationError("--distance", "unknown distance class '" + s + "'");
}

Method parse_method(const std::string& s) {
    if (s == "dp") return Method::Dp;
    if (s == "naive") return Method::Naive;
    if (s == "oracle") return Method::Oracle;
    throw CLI::ValidationError("--method", "unknown method '" + s + "'");
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

CostFunction load_cost(const std::string& spec, bool allow_nonmetric,
                       const std::vector<const Tree*>& trees) {
    CostFunction cost;
    if (spec == "unit") {
        cost = CostFunction::unit();
    } else {
        std::ifstream in(spec);
        if (!in) throw std::runtime_error("cannot open cost file '" + spec + "'");
        cost = CostFunction::load(in);
    }
    auto violations = validate_metric(cost, collect_alphabet(trees));
    if (!violations.empty()) {
        if (!allow_nonmetric) {
            std::ostringstream msg;
            msg << "cost function is not a metric (" << violations.size() << " violations), e.g. "
                << violations.front() << "; pass --allow-nonmetric to clamp weights at 0";
            throw std::runtime_error(msg.str());
        }
        std::cerr << "warning: cost function is not a metric (" << violations.size()
                  << " violations); pair weights clamped at 0\n";
        cost.set_clamp_negative_weights(true);
    }
    return cost;
}

Tree read_tree_argument(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream in(arg.substr(1));
        if (!in) throw std::runtime_error("cannot open tree file '" + arg.substr(1) + "'");
        std::string line;
        while (std::getline(in, line))
            if (line.find_first_not_of(" \t\r\n") != std::string::npos) return parse_bracket(line);
        throw std::runtime_error("no tree found in '" + arg.substr(1) + "'");
    }
    return parse_bracket(arg);
}

std::optional<double> default_time_limit() {
    if (const char* env = std::getenv("TREEDIST_TIME_LIMIT")) {
        try {
            return std::stod(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring unparsable TREEDIST_TIME_LIMIT\n";
        }
    }
    return std::nullopt;
}

struct BucketSpec {
    int lo = 2, hi = 100, step = 0;
};

BucketSpec parse_buckets(const std::string& s) {
    BucketSpec b;
    char c1 = 0, c2 = 0;
    std::istringstream in(s);
    if (!(in >> b.lo >> c1 >> b.hi) || c1 != ':')
        throw CLI::ValidationError("--bucket-by-total-nodes", "expected lo:hi[:step]");
    if (in >> c2 >> b.step && c2 != ':')
        throw CLI::ValidationError("--bucket-by-total-nodes", "expected lo:hi[:step]");
    return b;
}

int cmd_dist(const std::string& cls_name, const std::string& method_name,
             const std::string& cost_spec, bool allow_nonmetric, std::optional<double> time_limit,
             bool show_mapping, const std::string& tree1_arg, const std::string& tree2_arg) {
    Tree t1 = read_tree_argument(tree1_arg);
    Tree t2 = read_tree_argument(tree2_arg);
    CostFunction cost = load_cost(cost_spec, allow_nonmetric, {&t1, &t2});

    DistanceOptions opts;
    opts.cls = parse_class(cls_name);
    opts.method = parse_method(method_name);
    opts.solver.time_limit_seconds = time_limit;
    if (opts.method == Method::Oracle && t1.size() + t2.size() > opts.oracle_node_cap)
        throw std::runtime_error("oracle method is limited to " +
                                 std::to_string(opts.oracle_node_cap) + " total nodes");

    DistanceResult r = compute_distance(t1, t2, cost, opts);
    std::cout << format_scaled(r.distance, r.scale) << "\n";
    if (show_mapping)
        for (auto [x, y] : r.mapping) std::cout << "(" << x << "," << y << ")\n";
    if (!r.exact) {
        std::cerr << "timeout: reported distance is an upper bound\n";
        return kExitTimeout;
    }
    return kExitOk;
}

int cmd_batch(const std::string& input, const std::string& output, const std::string& distances,
              const std::string& methods, int pairs, const std::string& buckets,
              std::uint64_t seed, const std::string& cost_spec, bool allow_nonmetric,
              std::optional<double> time_limit) {
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open dataset '" + input + "'");
    std::vector<Tree> trees = load_dataset(in);
    if (trees.empty()) throw std::runtime_error("dataset '" + input + "' contains no trees");

    std::vector<const Tree*> refs;
    for (const Tree& t : trees) refs.push_back(&t);
    CostFunction cost = load_cost(cost_spec, allow_nonmetric, refs);

    BatchOptions opts;
    opts.classes.clear();
    for (const auto& c : split_csv(distances)) opts.classes.push_back(parse_class(c));
    opts.methods.clear();
    for (const auto& m : split_csv(methods)) opts.methods.push_back(parse_method(m));
    opts.pairs_per_bucket = pairs;
    BucketSpec b = parse_buckets(buckets);
    opts.bucket_lo = b.lo;
    opts.bucket_hi = b.hi;
    opts.bucket_step = b.step;
    opts.seed = seed;
    opts.solver.time_limit_seconds = time_limit;

    if (output.empty() || output == "-") {
        run_batch(trees, cost, opts, std::cout, std::cerr);
    } else {
        std::ofstream out(output);
        if (!out) throw std::runtime_error("cannot open output '" + output + "'");
        run_batch(trees, cost, opts, out, std::cout);
    }
    return kExitOk;
}

int cmd_gen(int count, const std::string& nodes_range, int max_degree, int labels,
            std::uint64_t seed) {
    int lo = 1, hi = 1;
    char c = 0;
    std::istringstream in(nodes_range);
    if (!(in >> lo >> c >> hi) || c != ':' || lo < 1 || hi < lo)
        throw CLI::ValidationError("--nodes", "expected lo:hi with 1 <= lo <= hi");
    Rng rng(seed);
    for (int i = 0; i < count; ++i) {
        Tree t = random_tree(rng, rng.range(lo, hi), max_degree, labels);
        std::cout << render_bracket(t) << "\n";
    }
    return kExitOk;
}

int cmd_convert(const std::string& from, const std::string& input, bool strict) {
    if (from != "cslogs") throw CLI::ValidationError("--from", "only 'cslogs' is supported");
    std::ifstream in(input);
    if (!in) throw std::runtime_error("cannot open input '" + input + "'");

    std::string line;
    std::size_t lineno = 0;
    int skipped = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream one(line);
        try {
            std::vector<Tree> trees = parse_cslogs(one);
            for (const Tree& t : trees) std::cout << render_bracket(t) << "\n";
        } catch (const ParseError& e) {
            if (strict) {
                std::cerr << "line " << lineno << ": " << e.what() << "\n";
                return kExitInput;
            }
            std::cerr << "warning: skipping line " << lineno << ": " << e.what() << "\n";
            ++skipped;
        }
    }
    if (skipped > 0) std::cerr << "skipped " << skipped << " malformed record(s)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact edit, segmental, bottom-up segmental and bottom-up distances "
                 "between labeled unordered rooted trees"};
    app.require_subcommand(1);

    // dist
    std::string d_class = "edit", d_method = "dp", d_cost = "unit";
    std::string d_tree1, d_tree2;
    bool d_show_mapping = false, d_allow_nonmetric = false;
    std::optional<double> d_time_limit = default_time_limit();
    double d_time_limit_arg = -1;
    auto* dist = app.add_subcommand("dist", "Distance between two trees");
    dist->add_option("--distance", d_class, "edit|seg|botseg|bot")->capture_default_str();
    dist->add_option("--method", d_method, "dp|naive|oracle")->capture_default_str();
    dist->add_option("--cost", d_cost, "unit or a cost file path")->capture_default_str();
    dist->add_option("--time-limit", d_time_limit_arg, "time limit in seconds");
    dist->add_flag("--show-mapping", d_show_mapping, "print the optimal mapping pairs");
    dist->add_flag("--allow-nonmetric", d_allow_nonmetric,
                   "accept non-metric costs, clamping negative pair weights at 0");
    dist->add_option("tree1", d_tree1, "bracket tree or @file")->required();
    dist->add_option("tree2", d_tree2, "bracket tree or @file")->required();

    // batch
    std::string b_input, b_output = "-", b_distances = "edit,seg,botseg,bot", b_methods = "dp";
    std::string b_buckets = "2:100", b_cost = "unit";
    int b_pairs = 100;
    std::uint64_t b_seed = 0;
    bool b_allow_nonmetric = false;
    double b_time_limit_arg = -1;
    auto* batch = app.add_subcommand("batch", "Run distances over sampled dataset pairs");
    batch->add_option("--input", b_input, "dataset file (bracket-per-line or CSLOGS)")
        ->required();
    batch->add_option("--output", b_output, "CSV output file, '-' for stdout")
        ->capture_default_str();
    batch->add_option("--pairs", b_pairs, "pairs sampled per bucket")->capture_default_str();
    batch->add_option("--bucket-by-total-nodes", b_buckets, "lo:hi[:step] on total nodes")
        ->capture_default_str();
    batch->add_option("--seed", b_seed, "sampling seed")->capture_default_str();
    batch->add_option("--distances", b_distances, "comma list of classes")->capture_default_str();
    batch->add_option("--methods", b_methods, "comma list of methods")->capture_default_str();
    batch->add_option("--cost", b_cost, "unit or a cost file path")->capture_default_str();
    batch->add_flag("--allow-nonmetric", b_allow_nonmetric, "accept non-metric costs");
    batch->add_option("--time-limit", b_time_limit_arg, "per-run time limit in seconds");

    // gen
    int g_count = 1, g_max_degree = 0, g_labels = 3;
    std::string g_nodes = "1:10";
    std::uint64_t g_seed = 0;
    auto* gen = app.add_subcommand("gen", "Generate random trees");
    gen->add_option("--count", g_count, "number of trees")->capture_default_str();
    gen->add_option("--nodes", g_nodes, "node count range lo:hi")->capture_default_str();
    gen->add_option("--max-degree", g_max_degree, "maximum children per node (0 = unbounded)")
        ->capture_default_str();
    gen->add_option("--labels", g_labels, "alphabet size")->capture_default_str();
    gen->add_option("--seed", g_seed, "generator seed")->capture_default_str();

    // convert
    std::string c_from = "cslogs", c_input;
    bool c_strict = false;
    auto* convert = app.add_subcommand("convert", "Convert a dataset to bracket lines");
    convert->add_option("--from", c_from, "input format (cslogs)")->capture_default_str();
    convert->add_option("--input", c_input, "input file")->required();
    convert->add_flag("--strict", c_strict, "abort on the first malformed record");

    // selftest
    std::uint64_t s_seed = 1;
    int s_trials = 20;
    auto* selftest = app.add_subcommand("selftest", "Run built-in property suites");
    selftest->add_option("--seed", s_seed, "suite seed")->capture_default_str();
    selftest->add_option("--trials", s_trials, "trials per suite")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (dist->parsed()) {
            std::optional<double> limit = d_time_limit;
            if (d_time_limit_arg >= 0) limit = d_time_limit_arg;
            return cmd_dist(d_class, d_method, d_cost, d_allow_nonmetric, limit, d_show_mapping,
                            d_tree1, d_tree2);
        }
        if (batch->parsed()) {
            std::optional<double> limit = default_time_limit();
            if (b_time_limit_arg >= 0) limit = b_time_limit_arg;
            return cmd_batch(b_input, b_output, b_distances, b_methods, b_pairs, b_buckets,
                             b_seed, b_cost, b_allow_nonmetric, limit);
        }
        if (gen->parsed()) return cmd_gen(g_count, g_nodes, g_max_degree, g_labels, g_seed);
        if (convert->parsed()) return cmd_convert(c_from, c_input, c_strict);
        if (selftest->parsed()) {
            SelftestOptions opts;
            opts.seed = s_seed;
            opts.trials = s_trials;
            return run_selftest(opts, std::cout) == 0 ? kExitOk : 1;
        }
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
