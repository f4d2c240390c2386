#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "treedist/tree.hpp"

namespace treedist {

/// All costs are exact scaled integers: the real cost of an operation is
/// value / scale(). Keeping the core integer-only lets every optimum and
/// equality test be exact.
using CostValue = std::int64_t;

class CostFunction {
public:
    /// Unit cost: substitution is 0 for equal labels and 1 otherwise,
    /// deletion and insertion are 1, scale 1.
    static CostFunction unit();

    /// Loads the cost file format:
    ///   scale <int>
    ///   sub <a> <b> <int> | del <a> <int> | ins <a> <int>
    ///   default-sub <int> | default-del <int> | default-ins <int>
    /// '#' starts a comment. Labels are whitespace-free tokens.
    static CostFunction load(std::istream& in);

    CostValue scale() const noexcept { return scale_; }

    CostValue sub(const std::string& a, const std::string& b) const;
    CostValue del(const std::string& a) const;
    CostValue ins(const std::string& b) const;

    /// del(x) + ins(y) - sub(x, y). Nonnegative whenever the cost function
    /// is a metric; with clamping enabled, negative values are raised to 0,
    /// otherwise they throw.
    CostValue pair_weight(const std::string& x, const std::string& y) const;

    void set_clamp_negative_weights(bool clamp) noexcept { clamp_negative_weights_ = clamp; }
    bool clamp_negative_weights() const noexcept { return clamp_negative_weights_; }

private:
    CostValue scale_ = 1;
    std::map<std::pair<std::string, std::string>, CostValue> sub_;
    std::unordered_map<std::string, CostValue> del_, ins_;
    CostValue default_sub_ = -1, default_del_ = -1, default_ins_ = -1;  // -1: unset
    bool clamp_negative_weights_ = false;
};

/// Checks the metric axioms over the given alphabet extended with the blank
/// symbol: nonnegativity, sub(a,a)=0, symmetry, and all triangle
/// inequalities that mix substitutions with deletions/insertions. Returns
/// one human-readable line per violation; empty means metric.
std::vector<std::string> validate_metric(const CostFunction& c,
                                         const std::vector<std::string>& alphabet);

/// Collects the distinct labels of any number of trees.
std::vector<std::string> collect_alphabet(const std::vector<const Tree*>& trees);

/// Cost of a one-to-one mapping: substitutions for mapped pairs, deletions
/// for unmapped nodes of t1, insertions for unmapped nodes of t2.
CostValue mapping_cost(const CostFunction& c, const Tree& t1, const Tree& t2,
                       const std::vector<std::pair<NodeId, NodeId>>& mapping);

/// Sum of all deletion costs in t1 plus all insertion costs in t2.
CostValue total_delete_insert(const CostFunction& c, const Tree& t1, const Tree& t2);

/// Converts a total mapping weight into a distance:
/// total_delete_insert - total_weight. Throws if the result is negative,
/// which would signal an internal bug.
CostValue distance_from_weight(const CostFunction& c, const Tree& t1, const Tree& t2,
                               CostValue total_weight);

/// Renders a scaled integer as an exact reduced rational, e.g. 3 with
/// scale 2 -> "3/2", 4 with scale 2 -> "2".
std::string format_scaled(CostValue value, CostValue scale);

}  // namespace treedist
