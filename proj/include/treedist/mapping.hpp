#pragma once

#include <utility>
#include <vector>

#include "treedist/cost.hpp"
#include "treedist/tree.hpp"

namespace treedist {

/// A mapping is a set of (node in T1, node in T2) pairs, kept sorted.
using Mapping = std::vector<std::pair<NodeId, NodeId>>;

/// The four mapping classes, from least to most constrained.
enum class MappingClass { Edit, Segmental, BottomUpSegmental, BottomUp };

const char* to_string(MappingClass cls);

/// Sorts and deduplicates the pair set.
void normalize_mapping(Mapping& m);

/// Tai mapping: one-to-one in both coordinates and ancestor-descendant
/// preserving in both directions.
bool is_tai(const Tree& t1, const Tree& t2, const Mapping& m);

/// Segmental: Tai, and any two nested mapped pairs force their parent pair
/// to be mapped.
bool is_segmental(const Tree& t1, const Tree& t2, const Mapping& m);

/// Bottom-up segmental: segmental, and every mapped pair has a mapped
/// leaf-leaf pair at or below it.
bool is_bottomup_segmental(const Tree& t1, const Tree& t2, const Mapping& m);

/// Bottom-up: Tai, and for every mapped pair the restriction of the mapping
/// to their children is a bijection.
bool is_bottomup(const Tree& t1, const Tree& t2, const Mapping& m);

bool is_valid_for_class(const Tree& t1, const Tree& t2, const Mapping& m, MappingClass cls);

struct BruteForceResult {
    CostValue distance = 0;
    Mapping mapping;
};

/// Exhaustive optimal-mapping oracle. Enumerates all one-to-one mappings by
/// recursive partial-injection search with Tai pruning, filters by the class
/// predicate, and returns the minimum cost together with one minimizer
/// (ties broken by lexicographically smallest pair set). Throws if
/// |t1| + |t2| exceeds node_cap.
BruteForceResult brute_force_distance(const Tree& t1, const Tree& t2, const CostFunction& cost,
                                      MappingClass cls, int node_cap = 14);

}  // namespace treedist
