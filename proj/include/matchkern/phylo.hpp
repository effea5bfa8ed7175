#pragma once

#include <string>
#include <vector>

#include "matchkern/matching.hpp"
#include "matchkern/partition.hpp"
#include "matchkern/rational.hpp"

namespace matchkern {

// Rooted binary phylogenetic tree: every internal node has exactly two
// children, leaves carry distinct labels 1..L. Canonical form stores nodes
// in preorder (root at index 0) with each node's children ordered by the
// minimum leaf label beneath, so equality and hashing are structural.
class PhyloTree {
public:
    struct Node {
        int label = 0;  // leaf label, 0 for internal nodes
        int left = -1;
        int right = -1;
        bool operator==(const Node&) const = default;
    };

    PhyloTree() = default;
    // Takes an arbitrary arena plus root index; validates and canonicalizes.
    static PhyloTree from_nodes(const std::vector<Node>& nodes, int root);
    static PhyloTree parse_newick(const std::string& text);
    // Leaf pair / join helpers for building trees bottom-up.
    static PhyloTree leaf(int label);
    static PhyloTree join(const PhyloTree& a, const PhyloTree& b);

    std::string newick() const;  // "((1,5),(2,(3,4)));"

    int leaf_count() const { return leaf_count_; }
    int height() const;  // edges on the longest root-to-leaf path
    const std::vector<Node>& nodes() const { return nodes_; }
    int root() const { return nodes_.empty() ? -1 : 0; }
    int min_leaf(int node) const { return min_leaf_[static_cast<std::size_t>(node)]; }
    bool is_leaf(int node) const { return nodes_[static_cast<std::size_t>(node)].label > 0; }

    bool operator==(const PhyloTree& o) const { return nodes_ == o.nodes_; }
    bool operator<(const PhyloTree& o) const;

private:
    std::vector<Node> nodes_;
    std::vector<int> min_leaf_;
    int leaf_count_ = 0;
};

std::size_t hash_value(const PhyloTree& t);

// Label-extension encoding: trees with n+1 leaves -> matchings in X_n.
Matching dh_encode(const PhyloTree& t);
PhyloTree dh_decode(const Matching& x);

// Locality-labelled embedding: trees with n+1 leaves -> matchings in
// X_{n+1}, pairing the root label with the auxiliary label 2n+2.
Matching richman_embed(const PhyloTree& t);

// All trees reachable by one nearest-neighbor-interchange move.
std::vector<PhyloTree> nni_neighbors(const PhyloTree& t);

struct NniDistance {
    int value = 0;
    bool exact = true;  // false: height-difference lower bound only
};

// Exact via bidirectional BFS up to exact_limit_leaves; otherwise the
// height-gap lower bound |ht(a) - ht(b)|.
NniDistance nni_distance(const PhyloTree& a, const PhyloTree& b, int exact_limit_leaves = 8);

// Caterpillar pair that is NNI-adjacent yet maps to matchings at quotient
// distance >= (n-1)/2 under dh_encode. Requires n >= 7.
struct NniMoveDistantMatchings {
    PhyloTree tree1, tree2;
    Matching x1, x2;
    bool nni_adjacent = false;
    int differing_pairs = 0;
    int distance_lower_bound = 0;  // ceil(differing/2)
};
NniMoveDistantMatchings nni_move_distant_matchings(int n);

// Matching pair one transposition apart whose decoded trees differ in
// height by >= n/2 - 2. Requires n >= 9.
struct TranspositionDistantTrees {
    Matching x1, x2;
    PhyloTree tree1, tree2;
    int height1 = 0, height2 = 0;
    int height_gap = 0;
};
TranspositionDistantTrees transposition_distant_trees(int n);

// 4n / ((2n+2)(2n+1)), exact.
Rat tree_fraction(int n);

// All rooted binary trees with m leaves, via the matching bijection.
std::vector<PhyloTree> enumerate_trees(int m);

}  // namespace matchkern

template <>
struct std::hash<matchkern::PhyloTree> {
    std::size_t operator()(const matchkern::PhyloTree& t) const {
        return matchkern::hash_value(t);
    }
};
