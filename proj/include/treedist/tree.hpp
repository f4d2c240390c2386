#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace treedist {

using NodeId = int;

/// Raised by the text parsers; `offset` is a byte offset into the input
/// (or a line number for line-oriented formats, see `is_line_based`).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t offset, bool line_based = false)
        : std::runtime_error(std::move(message)), offset_(offset), line_based_(line_based) {}

    std::size_t offset() const noexcept { return offset_; }
    bool is_line_based() const noexcept { return line_based_; }

private:
    std::size_t offset_;
    bool line_based_;
};

/// Immutable labeled rooted unordered tree.
///
/// Node ids are dense and assigned in pre-order, so the subtree of x is
/// exactly the id range [x, x + subtree_size(x)). Children lists are stored
/// in a fixed order for reproducibility but carry no semantics; every
/// operation in this library is invariant under child permutation.
class Tree {
public:
    static constexpr NodeId kNoParent = -1;

    /// Incremental construction; nodes may be added in any order as long as
    /// each parent is added before its children. build() reindexes ids in
    /// pre-order and freezes the tree.
    class Builder {
    public:
        NodeId add_node(NodeId parent, std::string label);
        Tree build() &&;

    private:
        std::vector<std::string> labels_;
        std::vector<NodeId> parents_;
    };

    int size() const noexcept { return static_cast<int>(labels_.size()); }
    NodeId root() const noexcept { return 0; }

    const std::string& label(NodeId x) const { return labels_[check(x)]; }
    NodeId parent(NodeId x) const { return parent_[check(x)]; }
    const std::vector<NodeId>& children(NodeId x) const { return children_[check(x)]; }
    int degree(NodeId x) const { return static_cast<int>(children(x).size()); }
    bool is_leaf(NodeId x) const { return children(x).empty(); }

    int pre_order(NodeId x) const { return check(x); }
    int post_order(NodeId x) const { return post_[check(x)]; }
    int subtree_size(NodeId x) const { return subtree_size_[check(x)]; }
    int depth(NodeId x) const { return depth_[check(x)]; }

    /// Strict ancestor test: true iff x < y in the subtree partial order.
    bool is_ancestor(NodeId x, NodeId y) const {
        check(x);
        check(y);
        return y > x && y < x + subtree_size_[x];
    }
    bool is_ancestor_or_self(NodeId x, NodeId y) const { return x == check(y) || is_ancestor(x, y); }
    bool comparable(NodeId x, NodeId y) const {
        return x == y || is_ancestor(x, y) || is_ancestor(y, x);
    }

    /// Leaves of the whole tree, in id order.
    const std::vector<NodeId>& leaves() const noexcept { return leaves_; }
    /// Leaves of the subtree rooted at x, in id order.
    std::vector<NodeId> leaves_under(NodeId x) const;

    /// Interned canonical code of the subtree shape at x (labels ignored).
    /// Codes are comparable across all trees in the process: equal code
    /// means structurally isomorphic subtrees.
    std::int64_t shape_code(NodeId x) const { return shape_[check(x)]; }

    std::vector<NodeId> path_to_leaf(NodeId x, NodeId leaf) const;

private:
    friend class Builder;
    Tree() = default;

    NodeId check(NodeId x) const {
        if (x < 0 || x >= size()) throw std::out_of_range("node id out of range");
        return x;
    }

    std::vector<std::string> labels_;
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<int> post_;
    std::vector<int> subtree_size_;
    std::vector<int> depth_;
    std::vector<std::int64_t> shape_;
    std::vector<NodeId> leaves_;
};

/// Parses the bracket format `tree := label [ '(' tree (',' tree)* ')' ]`.
/// Labels are [A-Za-z0-9_.-]+ or single-quoted with '' escaping; ASCII
/// whitespace between tokens is ignored. Throws ParseError with the byte
/// offset of the problem.
Tree parse_bracket(std::string_view text);

/// Renders a tree in the bracket format with children in a canonical
/// deterministic order (sorted by canonical shape code, then by rendered
/// text, which starts with the label). parse_bracket(render_bracket(t)) is
/// label-isomorphic to t.
std::string render_bracket(const Tree& t);

/// Parses one whitespace-separated integer depth-first record: a
/// nonnegative integer pushes a child with that decimal label, -1 pops to
/// the parent. Trailing pops may be omitted; a pop past the closed root is
/// an error, as are tokens after the root is closed.
Tree parse_cslogs_record(const std::vector<long long>& tokens);

/// Reads one tree per nonempty line. Each record is the longest suffix of
/// the line's integer tokens that forms a balanced depth-first encoding
/// (depth returns to the root, or closes it, exactly at the end); leading
/// integers are treated as a header and skipped. Throws ParseError carrying
/// the 1-based line number.
std::vector<Tree> parse_cslogs(std::istream& in);

/// True iff no two distinct members of `nodes` are comparable under the
/// ancestor partial order.
bool is_antichain(const Tree& t, const std::vector<NodeId>& nodes);

/// True iff the subtrees t1(x) and t2(y) are isomorphic as unlabeled
/// unordered rooted trees.
bool structurally_isomorphic(const Tree& t1, NodeId x, const Tree& t2, NodeId y);

}  // namespace treedist
