#include "treedist/tree.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

namespace treedist {

namespace {

// Process-wide AHU interner. A shape code is an id for the sorted multiset
// of children shape codes, so equal codes across any two trees mean equal
// unlabeled shapes. Guarded by a mutex; trees only touch it at build time.
class ShapeCodebook {
public:
    static std::int64_t intern(std::vector<std::int64_t> sorted_child_codes) {
        static ShapeCodebook instance;
        std::lock_guard<std::mutex> lock(instance.mutex_);
        auto [it, inserted] =
            instance.codes_.try_emplace(std::move(sorted_child_codes), instance.next_);
        if (inserted) ++instance.next_;
        return it->second;
    }

private:
    std::mutex mutex_;
    std::map<std::vector<std::int64_t>, std::int64_t> codes_;
    std::int64_t next_ = 0;
};

bool is_bare_label_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

}  // namespace

NodeId Tree::Builder::add_node(NodeId parent, std::string label) {
    NodeId id = static_cast<NodeId>(labels_.size());
    if (label.empty()) throw std::invalid_argument("empty label");
    if (parent != Tree::kNoParent && (parent < 0 || parent >= id))
        throw std::invalid_argument("parent must be added before its children");
    labels_.push_back(std::move(label));
    parents_.push_back(parent);
    return id;
}

Tree Tree::Builder::build() && {
    const int n = static_cast<int>(labels_.size());
    if (n == 0) throw std::invalid_argument("tree must have at least one node");

    NodeId root = kNoParent;
    std::vector<std::vector<NodeId>> kids(n);
    for (NodeId v = 0; v < n; ++v) {
        if (parents_[v] == kNoParent) {
            if (root != kNoParent) throw std::invalid_argument("multiple roots");
            root = v;
        } else {
            kids[parents_[v]].push_back(v);
        }
    }
    if (root == kNoParent) throw std::invalid_argument("no root");

    // Reindex in pre-order (iterative DFS, children in insertion order).
    std::vector<NodeId> order;  // new id -> old id
    order.reserve(n);
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
    }
    if (static_cast<int>(order.size()) != n)
        throw std::invalid_argument("nodes unreachable from root");

    std::vector<NodeId> new_id(n);
    for (int i = 0; i < n; ++i) new_id[order[i]] = i;

    Tree t;
    t.labels_.resize(n);
    t.parent_.resize(n);
    t.children_.resize(n);
    t.post_.assign(n, 0);
    t.subtree_size_.assign(n, 1);
    t.depth_.assign(n, 0);
    t.shape_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        NodeId old = order[i];
        t.labels_[i] = std::move(labels_[old]);
        t.parent_[i] = parents_[old] == kNoParent ? kNoParent : new_id[parents_[old]];
        t.children_[i].reserve(kids[old].size());
        for (NodeId c : kids[old]) t.children_[i].push_back(new_id[c]);
        if (i > 0) t.depth_[i] = t.depth_[t.parent_[i]] + 1;
    }

    int post = 0;
    std::vector<std::pair<NodeId, bool>> frames{{0, false}};
    while (!frames.empty()) {
        auto [v, expanded] = frames.back();
        frames.pop_back();
        if (expanded) {
            t.post_[v] = post++;
            continue;
        }
        frames.emplace_back(v, true);
        for (auto it = t.children_[v].rbegin(); it != t.children_[v].rend(); ++it)
            frames.emplace_back(*it, false);
    }
    for (NodeId v = n - 1; v >= 1; --v) t.subtree_size_[t.parent_[v]] += t.subtree_size_[v];
    for (NodeId v = n - 1; v >= 0; --v) {
        std::vector<std::int64_t> child_codes;
        child_codes.reserve(t.children_[v].size());
        for (NodeId c : t.children_[v]) child_codes.push_back(t.shape_[c]);
        std::sort(child_codes.begin(), child_codes.end());
        t.shape_[v] = ShapeCodebook::intern(std::move(child_codes));
        if (t.children_[v].empty()) t.leaves_.push_back(v);
    }
    std::sort(t.leaves_.begin(), t.leaves_.end());
    return t;
}

std::vector<NodeId> Tree::leaves_under(NodeId x) const {
    check(x);
    std::vector<NodeId> out;
    const NodeId end = x + subtree_size_[x];
    auto it = std::lower_bound(leaves_.begin(), leaves_.end(), x);
    for (; it != leaves_.end() && *it < end; ++it) out.push_back(*it);
    return out;
}

std::vector<NodeId> Tree::path_to_leaf(NodeId x, NodeId leaf) const {
    check(x);
    check(leaf);
    if (!is_leaf(leaf) || !is_ancestor_or_self(x, leaf))
        throw std::invalid_argument("path_to_leaf: target is not a leaf of the subtree");
    std::vector<NodeId> path;
    for (NodeId v = leaf; v != x; v = parent_[v]) path.push_back(v);
    path.push_back(x);
    std::reverse(path.begin(), path.end());
    return path;
}

Tree parse_bracket(std::string_view text) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto fail = [&](const std::string& what) -> ParseError {
        return ParseError(what + " at offset " + std::to_string(pos), pos);
    };

    auto parse_label = [&]() -> std::string {
        skip_ws();
        if (pos >= text.size()) throw fail("expected label");
        if (text[pos] == '\'') {
            std::size_t start = pos++;
            std::string out;
            while (true) {
                if (pos >= text.size()) {
                    pos = start;
                    throw fail("unterminated quoted label");
                }
                if (text[pos] == '\'') {
                    if (pos + 1 < text.size() && text[pos + 1] == '\'') {
                        out.push_back('\'');
                        pos += 2;
                    } else {
                        ++pos;
                        break;
                    }
                } else {
                    out.push_back(text[pos++]);
                }
            }
            if (out.empty()) {
                pos = start;
                throw fail("empty label");
            }
            return out;
        }
        std::size_t start = pos;
        while (pos < text.size() && is_bare_label_char(text[pos])) ++pos;
        if (pos == start) throw fail("expected label");
        return std::string(text.substr(start, pos - start));
    };

    Tree::Builder builder;
    // Recursive descent, iterative to keep deep chains safe.
    struct Frame {
        NodeId node;
    };
    std::vector<Frame> open;
    skip_ws();
    if (pos >= text.size()) throw ParseError("empty input", 0);

    NodeId root = builder.add_node(Tree::kNoParent, parse_label());
    NodeId current = root;
    skip_ws();
    while (pos < text.size()) {
        char c = text[pos];
        if (c == '(') {
            ++pos;
            open.push_back({current});
            current = builder.add_node(open.back().node, parse_label());
        } else if (c == ',') {
            if (open.empty()) throw fail("',' outside parentheses");
            ++pos;
            current = builder.add_node(open.back().node, parse_label());
        } else if (c == ')') {
            if (open.empty()) throw fail("unmatched ')'");
            ++pos;
            current = open.back().node;
            open.pop_back();
        } else {
            throw fail("unexpected character");
        }
        skip_ws();
    }
    if (!open.empty()) throw fail("unterminated '('");
    return std::move(builder).build();
}

namespace {

std::string quote_label(const std::string& label) {
    bool bare = !label.empty();
    for (char c : label) bare = bare && is_bare_label_char(c);
    if (bare) return label;
    std::string out = "'";
    for (char c : label) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
    }
    out.push_back('\'');
    return out;
}

// Canonical unlabeled shape string: "(" + sorted child shapes + ")".
const std::string& shape_string(const Tree& t, NodeId v, std::vector<std::string>& memo) {
    if (!memo[v].empty()) return memo[v];
    std::vector<std::string> parts;
    parts.reserve(t.children(v).size());
    for (NodeId c : t.children(v)) parts.push_back(shape_string(t, c, memo));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (const auto& p : parts) out += p;
    out += ")";
    memo[v] = std::move(out);
    return memo[v];
}

const std::string& render_node(const Tree& t, NodeId v, std::vector<std::string>& shape_memo,
                               std::vector<std::string>& text_memo) {
    if (!text_memo[v].empty()) return text_memo[v];
    std::string out = quote_label(t.label(v));
    if (!t.is_leaf(v)) {
        std::vector<NodeId> kids = t.children(v);
        for (NodeId c : kids) render_node(t, c, shape_memo, text_memo);
        std::sort(kids.begin(), kids.end(), [&](NodeId a, NodeId b) {
            const std::string& sa = shape_string(t, a, shape_memo);
            const std::string& sb = shape_string(t, b, shape_memo);
            if (sa != sb) return sa < sb;
            return text_memo[a] < text_memo[b];
        });
        out += "(";
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i) out += ",";
            out += text_memo[kids[i]];
        }
        out += ")";
    }
    text_memo[v] = std::move(out);
    return text_memo[v];
}

}  // namespace

std::string render_bracket(const Tree& t) {
    std::vector<std::string> shape_memo(t.size()), text_memo(t.size());
    return render_node(t, t.root(), shape_memo, text_memo);
}

Tree parse_cslogs_record(const std::vector<long long>& tokens) {
    if (tokens.empty()) throw ParseError("empty record", 0);
    if (tokens[0] < 0) throw ParseError("record must start with a node item", 0);
    Tree::Builder builder;
    std::vector<NodeId> stack;
    stack.push_back(builder.add_node(Tree::kNoParent, std::to_string(tokens[0])));
    bool closed = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
        long long tok = tokens[i];
        if (closed)
            throw ParseError(tok == -1 ? "pops below root" : "trailing unconsumed tokens", i);
        if (tok == -1) {
            stack.pop_back();
            if (stack.empty()) closed = true;
        } else if (tok >= 0) {
            stack.push_back(builder.add_node(stack.back(), std::to_string(tok)));
        } else {
            throw ParseError("invalid token " + std::to_string(tok), i);
        }
    }
    // Omitted trailing pops are fine; only a pop past the closed root is not.
    return std::move(builder).build();
}

namespace {

// Longest suffix of `tokens` that is a balanced depth-first encoding:
// starts with an item, never pops past the root, and ends with depth <= 1.
// Returns the start index, or npos if no suffix qualifies.
std::size_t balanced_suffix_start(const std::vector<long long>& tokens) {
    for (std::size_t s = 0; s < tokens.size(); ++s) {
        if (tokens[s] < 0) continue;
        long long depth = 1;
        bool ok = true;
        for (std::size_t i = s + 1; i < tokens.size() && ok; ++i) {
            if (tokens[i] == -1) {
                if (depth == 0) ok = false;
                --depth;
            } else if (tokens[i] >= 0) {
                if (depth == 0) ok = false;  // tokens after the root closed
                ++depth;
            } else {
                ok = false;
            }
        }
        if (ok && depth <= 1) return s;
    }
    return std::string::npos;
}

}  // namespace

std::vector<Tree> parse_cslogs(std::istream& in) {
    std::vector<Tree> trees;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<long long> tokens;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                long long value = std::stoll(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                tokens.push_back(value);
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": non-integer token '" + tok +
                                     "'",
                                 lineno, true);
            }
        }
        if (tokens.empty()) continue;
        std::size_t start = balanced_suffix_start(tokens);
        if (start == std::string::npos) {
            // Re-parse the whole line strictly so the error says what is wrong.
            try {
                parse_cslogs_record(tokens);
                throw ParseError("unbalanced depth-first encoding", 0);
            } catch (const ParseError& e) {
                throw ParseError("line " + std::to_string(lineno) + ": " + e.what(), lineno, true);
            }
        }
        trees.push_back(
            parse_cslogs_record(std::vector<long long>(tokens.begin() + start, tokens.end())));
    }
    return trees;
}

bool is_antichain(const Tree& t, const std::vector<NodeId>& nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] != nodes[j] && t.comparable(nodes[i], nodes[j])) return false;
    return true;
}

bool structurally_isomorphic(const Tree& t1, NodeId x, const Tree& t2, NodeId y) {
    return t1.shape_code(x) == t2.shape_code(y);
}

}  // namespace treedist
