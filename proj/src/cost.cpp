#include "treedist/cost.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace treedist {

CostFunction CostFunction::unit() {
    CostFunction c;
    c.scale_ = 1;
    c.default_sub_ = 1;
    c.default_del_ = 1;
    c.default_ins_ = 1;
    return c;
}

CostFunction CostFunction::load(std::istream& in) {
    CostFunction c;
    c.default_sub_ = c.default_del_ = c.default_ins_ = -1;
    std::string line;
    std::size_t lineno = 0;
    bool saw_scale = false;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        auto want_value = [&](CostValue& out) {
            if (!(ls >> out))
                throw ParseError("line " + std::to_string(lineno) + ": expected integer value",
                                 lineno, true);
        };
        auto want_label = [&](std::string& out) {
            if (!(ls >> out))
                throw ParseError("line " + std::to_string(lineno) + ": expected label", lineno,
                                 true);
        };
        if (kind == "scale") {
            want_value(c.scale_);
            if (c.scale_ <= 0)
                throw ParseError("line " + std::to_string(lineno) + ": scale must be positive",
                                 lineno, true);
            saw_scale = true;
        } else if (kind == "sub") {
            std::string a, b;
            want_label(a);
            want_label(b);
            CostValue v;
            want_value(v);
            c.sub_[{a, b}] = v;
        } else if (kind == "del") {
            std::string a;
            want_label(a);
            CostValue v;
            want_value(v);
            c.del_[a] = v;
        } else if (kind == "ins") {
            std::string b;
            want_label(b);
            CostValue v;
            want_value(v);
            c.ins_[b] = v;
        } else if (kind == "default-sub") {
            want_value(c.default_sub_);
        } else if (kind == "default-del") {
            want_value(c.default_del_);
        } else if (kind == "default-ins") {
            want_value(c.default_ins_);
        } else {
            throw ParseError("line " + std::to_string(lineno) + ": unknown directive '" + kind +
                                 "'",
                             lineno, true);
        }
        std::string extra;
        if (ls >> extra)
            throw ParseError("line " + std::to_string(lineno) + ": trailing token '" + extra + "'",
                             lineno, true);
    }
    if (!saw_scale) c.scale_ = 1;
    return c;
}

CostValue CostFunction::sub(const std::string& a, const std::string& b) const {
    if (auto it = sub_.find({a, b}); it != sub_.end()) return it->second;
    if (auto it = sub_.find({b, a}); it != sub_.end()) return it->second;
    if (a == b) return 0;
    if (default_sub_ < 0)
        throw std::invalid_argument("no substitution cost for (" + a + ", " + b +
                                    ") and no default-sub");
    return default_sub_;
}

CostValue CostFunction::del(const std::string& a) const {
    if (auto it = del_.find(a); it != del_.end()) return it->second;
    if (default_del_ < 0)
        throw std::invalid_argument("no deletion cost for " + a + " and no default-del");
    return default_del_;
}

CostValue CostFunction::ins(const std::string& b) const {
    if (auto it = ins_.find(b); it != ins_.end()) return it->second;
    if (default_ins_ < 0)
        throw std::invalid_argument("no insertion cost for " + b + " and no default-ins");
    return default_ins_;
}

CostValue CostFunction::pair_weight(const std::string& x, const std::string& y) const {
    CostValue w = del(x) + ins(y) - sub(x, y);
    if (w < 0) {
        if (clamp_negative_weights_) return 0;
        throw std::logic_error("negative pair weight for (" + x + ", " + y +
                               "): cost function is not a metric");
    }
    return w;
}

std::vector<std::string> validate_metric(const CostFunction& c,
                                         const std::vector<std::string>& alphabet) {
    std::vector<std::string> out;
    auto report = [&](std::string msg) { out.push_back(std::move(msg)); };

    for (const auto& a : alphabet) {
        if (c.del(a) < 0) report("del(" + a + ") < 0");
        if (c.ins(a) < 0) report("ins(" + a + ") < 0");
        if (c.sub(a, a) != 0) report("sub(" + a + "," + a + ") != 0");
        for (const auto& b : alphabet) {
            if (c.sub(a, b) < 0) report("sub(" + a + "," + b + ") < 0");
            if (c.sub(a, b) != c.sub(b, a))
                report("sub(" + a + "," + b + ") != sub(" + b + "," + a + ")");
        }
    }
    for (const auto& a : alphabet)
        for (const auto& b : alphabet) {
            if (c.sub(a, b) > c.del(a) + c.ins(b))
                report("sub(" + a + "," + b + ") > del(" + a + ")+ins(" + b + ")");
            if (c.del(a) > c.sub(a, b) + c.del(b))
                report("del(" + a + ") > sub(" + a + "," + b + ")+del(" + b + ")");
            if (c.ins(b) > c.ins(a) + c.sub(a, b))
                report("ins(" + b + ") > ins(" + a + ")+sub(" + a + "," + b + ")");
            for (const auto& d : alphabet)
                if (c.sub(a, d) > c.sub(a, b) + c.sub(b, d))
                    report("sub(" + a + "," + d + ") > sub(" + a + "," + b + ")+sub(" + b + "," +
                           d + ")");
        }
    return out;
}

std::vector<std::string> collect_alphabet(const std::vector<const Tree*>& trees) {
    std::set<std::string> seen;
    for (const Tree* t : trees)
        for (NodeId v = 0; v < t->size(); ++v) seen.insert(t->label(v));
    return {seen.begin(), seen.end()};
}

CostValue mapping_cost(const CostFunction& c, const Tree& t1, const Tree& t2,
                       const std::vector<std::pair<NodeId, NodeId>>& mapping) {
    std::vector<bool> used1(t1.size(), false), used2(t2.size(), false);
    CostValue total = 0;
    for (auto [x, y] : mapping) {
        if (x < 0 || x >= t1.size() || y < 0 || y >= t2.size())
            throw std::out_of_range("mapping pair references invalid node id");
        total += c.sub(t1.label(x), t2.label(y));
        used1[x] = true;
        used2[y] = true;
    }
    for (NodeId x = 0; x < t1.size(); ++x)
        if (!used1[x]) total += c.del(t1.label(x));
    for (NodeId y = 0; y < t2.size(); ++y)
        if (!used2[y]) total += c.ins(t2.label(y));
    return total;
}

CostValue total_delete_insert(const CostFunction& c, const Tree& t1, const Tree& t2) {
    CostValue total = 0;
    for (NodeId x = 0; x < t1.size(); ++x) total += c.del(t1.label(x));
    for (NodeId y = 0; y < t2.size(); ++y) total += c.ins(t2.label(y));
    return total;
}

CostValue distance_from_weight(const CostFunction& c, const Tree& t1, const Tree& t2,
                               CostValue total_weight) {
    CostValue d = total_delete_insert(c, t1, t2) - total_weight;
    if (d < 0)
        throw std::logic_error("distance_from_weight: negative distance (weight " +
                               std::to_string(total_weight) + ")");
    return d;
}

std::string format_scaled(CostValue value, CostValue scale) {
    if (scale <= 0) throw std::invalid_argument("scale must be positive");
    CostValue g = std::gcd(value < 0 ? -value : value, scale);
    if (g == 0) g = 1;
    CostValue num = value / g, den = scale / g;
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

}  // namespace treedist
