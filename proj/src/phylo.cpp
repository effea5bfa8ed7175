#include "matchkern/phylo.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace matchkern {

namespace {

struct Builder {
    const std::vector<PhyloTree::Node>* src = nullptr;
    std::vector<PhyloTree::Node> out;
    std::vector<int> min_leaf;
    int leaves = 0;

    // Minimum leaf label in the source subtree, with structure validation.
    int source_min(int old) {
        const auto& node = (*src)[static_cast<std::size_t>(old)];
        if (node.left < 0 && node.right < 0) {
            if (node.label < 1) throw std::invalid_argument("leaf without positive label");
            return node.label;
        }
        if (node.left < 0 || node.right < 0)
            throw std::invalid_argument("internal node must have exactly two children");
        return std::min(source_min(node.left), source_min(node.right));
    }

    // Emits the subtree in preorder with the smaller-min-leaf child first.
    int build(int old) {
        const auto& node = (*src)[static_cast<std::size_t>(old)];
        int idx = static_cast<int>(out.size());
        out.push_back({});
        min_leaf.push_back(0);
        if (node.left < 0) {
            out[static_cast<std::size_t>(idx)].label = node.label;
            min_leaf[static_cast<std::size_t>(idx)] = node.label;
            ++leaves;
            return idx;
        }
        int first = node.left, second = node.right;
        if (source_min(second) < source_min(first)) std::swap(first, second);
        int left_idx = build(first);
        int right_idx = build(second);
        out[static_cast<std::size_t>(idx)].left = left_idx;
        out[static_cast<std::size_t>(idx)].right = right_idx;
        min_leaf[static_cast<std::size_t>(idx)] = min_leaf[static_cast<std::size_t>(left_idx)];
        return idx;
    }
};

}  // namespace

PhyloTree PhyloTree::from_nodes(const std::vector<Node>& nodes, int root) {
    if (root < 0 || root >= static_cast<int>(nodes.size()))
        throw std::invalid_argument("bad root index");
    Builder builder;
    builder.src = &nodes;
    builder.source_min(root);  // validates the shape up front
    builder.build(root);
    PhyloTree t;
    t.nodes_ = std::move(builder.out);
    t.min_leaf_ = std::move(builder.min_leaf);
    t.leaf_count_ = builder.leaves;
    // leaf labels must be distinct (not necessarily contiguous: intermediate
    // subtrees may carry a label subset)
    std::set<int> seen;
    for (const auto& node : t.nodes_)
        if (node.label > 0 && !seen.insert(node.label).second)
            throw std::invalid_argument("leaf labels must be distinct");
    return t;
}

// Leaves labelled exactly 1..L, as the encodings require.
static bool contiguous_labels(const PhyloTree& t) {
    std::set<int> labels;
    for (const auto& node : t.nodes())
        if (node.label > 0) labels.insert(node.label);
    return !labels.empty() && *labels.begin() == 1 &&
           *labels.rbegin() == static_cast<int>(labels.size());
}

PhyloTree PhyloTree::leaf(int label) {
    std::vector<Node> nodes{{label, -1, -1}};
    PhyloTree t;
    t.nodes_ = std::move(nodes);
    t.min_leaf_ = {label};
    t.leaf_count_ = 1;
    return t;
}

PhyloTree PhyloTree::join(const PhyloTree& a, const PhyloTree& b) {
    std::vector<Node> nodes;
    nodes.push_back({0, 1, 1 + static_cast<int>(a.nodes_.size())});
    for (const auto& node : a.nodes_) {
        Node shifted = node;
        if (shifted.left >= 0) shifted.left += 1;
        if (shifted.right >= 0) shifted.right += 1;
        nodes.push_back(shifted);
    }
    int offset = 1 + static_cast<int>(a.nodes_.size());
    for (const auto& node : b.nodes_) {
        Node shifted = node;
        if (shifted.left >= 0) shifted.left += offset;
        if (shifted.right >= 0) shifted.right += offset;
        nodes.push_back(shifted);
    }
    return from_nodes(nodes, 0);
}

namespace {

int parse_subtree(const std::string& s, std::size_t& pos, std::vector<PhyloTree::Node>& nodes) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size()) throw std::invalid_argument("unexpected end of newick string");
    if (s[pos] == '(') {
        ++pos;
        int left = parse_subtree(s, pos, nodes);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size() || s[pos] != ',') throw std::invalid_argument("expected ','");
        ++pos;
        int right = parse_subtree(s, pos, nodes);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("expected ')'");
        ++pos;
        nodes.push_back({0, left, right});
        return static_cast<int>(nodes.size()) - 1;
    }
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) throw std::invalid_argument("expected leaf label");
    nodes.push_back({std::stoi(s.substr(start, pos - start)), -1, -1});
    return static_cast<int>(nodes.size()) - 1;
}

}  // namespace

PhyloTree PhyloTree::parse_newick(const std::string& text) {
    std::vector<Node> nodes;
    std::size_t pos = 0;
    int root = parse_subtree(text, pos, nodes);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size() || text[pos] != ';')
        throw std::invalid_argument("newick string must end with ';'");
    return from_nodes(nodes, root);
}

namespace {

void write_newick(const PhyloTree& t, int node, std::string& out) {
    const auto& n = t.nodes()[static_cast<std::size_t>(node)];
    if (n.label > 0) {
        out += std::to_string(n.label);
        return;
    }
    out += '(';
    write_newick(t, n.left, out);
    out += ',';
    write_newick(t, n.right, out);
    out += ')';
}

}  // namespace

std::string PhyloTree::newick() const {
    std::string out;
    write_newick(*this, root(), out);
    out += ';';
    return out;
}

int PhyloTree::height() const {
    std::vector<int> depth(nodes_.size(), 0);
    int best = 0;
    // preorder storage: parents precede children
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& node = nodes_[i];
        if (node.label > 0) {
            best = std::max(best, depth[i]);
            continue;
        }
        depth[static_cast<std::size_t>(node.left)] = depth[i] + 1;
        depth[static_cast<std::size_t>(node.right)] = depth[i] + 1;
    }
    return best;
}

bool PhyloTree::operator<(const PhyloTree& o) const {
    return newick() < o.newick();
}

std::size_t hash_value(const PhyloTree& t) {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (const auto& node : t.nodes()) {
        h = h * 0x100000001b3ull ^ static_cast<std::size_t>(node.label + 1);
        h = h * 0x100000001b3ull ^ static_cast<std::size_t>(node.left + 2);
        h = h * 0x100000001b3ull ^ static_cast<std::size_t>(node.right + 2);
    }
    return h;
}

Matching dh_encode(const PhyloTree& t) {
    int leaves = t.leaf_count();
    if (leaves < 2) throw std::invalid_argument("dh_encode: at least two leaves required");
    if (!contiguous_labels(t)) throw std::invalid_argument("dh_encode: leaves must be 1..L");
    int n = leaves - 1;
    const auto& nodes = t.nodes();
    std::vector<int> parent(nodes.size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].label > 0) continue;
        parent[static_cast<std::size_t>(nodes[i].left)] = static_cast<int>(i);
        parent[static_cast<std::size_t>(nodes[i].right)] = static_cast<int>(i);
    }
    std::vector<int> label(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) label[i] = nodes[i].label;

    std::vector<std::pair<int, int>> pairs;
    int next_label = n + 2;
    // Repeatedly take the labeled sibling pair with an unlabeled non-root
    // parent that contains the minimal label.
    for (int step = 0; step < n - 1; ++step) {
        int best = -1, best_min = 0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].label > 0 || label[i] != 0) continue;               // needs unlabeled internal
            if (static_cast<int>(i) == t.root()) continue;                   // root is never labeled
            int a = label[static_cast<std::size_t>(nodes[i].left)];
            int b = label[static_cast<std::size_t>(nodes[i].right)];
            if (a == 0 || b == 0) continue;
            int lo = std::min(a, b);
            if (best < 0 || lo < best_min) {
                best = static_cast<int>(i);
                best_min = lo;
            }
        }
        if (best < 0) throw std::logic_error("dh_encode: no eligible sibling pair");
        int a = label[static_cast<std::size_t>(nodes[static_cast<std::size_t>(best)].left)];
        int b = label[static_cast<std::size_t>(nodes[static_cast<std::size_t>(best)].right)];
        pairs.emplace_back(a, b);
        label[static_cast<std::size_t>(best)] = next_label++;
    }
    const auto& root_node = nodes[static_cast<std::size_t>(t.root())];
    pairs.emplace_back(label[static_cast<std::size_t>(root_node.left)],
                       label[static_cast<std::size_t>(root_node.right)]);
    return Matching::from_pairs(std::move(pairs));
}

PhyloTree dh_decode(const Matching& x) {
    int n = x.size();
    int leaves = n + 1;
    std::vector<PhyloTree::Node> nodes;
    std::unordered_map<int, int> root_of_label;  // label -> arena index of its subtree root
    for (int i = 1; i <= leaves; ++i) {
        nodes.push_back({i, -1, -1});
        root_of_label.emplace(i, static_cast<int>(nodes.size()) - 1);
    }
    std::vector<bool> used(x.pairs().size(), false);
    for (int next = n + 2; next <= 2 * n; ++next) {
        int best = -1;
        for (std::size_t p = 0; p < x.pairs().size(); ++p) {
            if (used[p]) continue;
            auto [a, b] = x.pairs()[p];
            if (!root_of_label.count(a) || !root_of_label.count(b)) continue;
            if (best < 0 || a < x.pairs()[static_cast<std::size_t>(best)].first)
                best = static_cast<int>(p);
        }
        if (best < 0) throw std::invalid_argument("dh_decode: malformed matching");
        auto [a, b] = x.pairs()[static_cast<std::size_t>(best)];
        used[static_cast<std::size_t>(best)] = true;
        nodes.push_back({0, root_of_label.at(a), root_of_label.at(b)});
        root_of_label.erase(a);
        root_of_label.erase(b);
        root_of_label.emplace(next, static_cast<int>(nodes.size()) - 1);
    }
    int remaining = -1;
    for (std::size_t p = 0; p < x.pairs().size(); ++p)
        if (!used[p]) remaining = static_cast<int>(p);
    auto [a, b] = x.pairs()[static_cast<std::size_t>(remaining)];
    if (!root_of_label.count(a) || !root_of_label.count(b))
        throw std::invalid_argument("dh_decode: malformed matching");
    nodes.push_back({0, root_of_label.at(a), root_of_label.at(b)});
    return PhyloTree::from_nodes(nodes, static_cast<int>(nodes.size()) - 1);
}

namespace {

// Internal label under the locality rule: n + (largest leaf j in the subtree
// whose label n+j is not already used below). Equivalently
// n + max(min leaf of left subtree, min leaf of right subtree).
int richman_label(const PhyloTree& t, int node, int n) {
    const auto& nd = t.nodes()[static_cast<std::size_t>(node)];
    if (nd.label > 0) return nd.label;
    return n + std::max(t.min_leaf(nd.left), t.min_leaf(nd.right));
}

}  // namespace

Matching richman_embed(const PhyloTree& t) {
    int leaves = t.leaf_count();
    if (leaves < 2) throw std::invalid_argument("richman_embed: at least two leaves required");
    if (!contiguous_labels(t)) throw std::invalid_argument("richman_embed: leaves must be 1..L");
    int n = leaves - 1;
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < t.nodes().size(); ++i) {
        const auto& node = t.nodes()[i];
        if (node.label > 0) continue;
        pairs.emplace_back(richman_label(t, node.left, n), richman_label(t, node.right, n));
    }
    pairs.emplace_back(richman_label(t, t.root(), n), 2 * n + 2);
    return Matching::from_pairs(std::move(pairs));
}

std::vector<PhyloTree> nni_neighbors(const PhyloTree& t) {
    std::vector<PhyloTree> out;
    if (t.leaf_count() < 3) return out;
    const auto& nodes = t.nodes();
    std::vector<int> parent(nodes.size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].label > 0) continue;
        parent[static_cast<std::size_t>(nodes[i].left)] = static_cast<int>(i);
        parent[static_cast<std::size_t>(nodes[i].right)] = static_cast<int>(i);
    }
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (nodes[v].label > 0) continue;                    // v internal
        int u = parent[v];
        if (u < 0) continue;                                 // skip the root: need an internal edge
        int sibling = nodes[static_cast<std::size_t>(u)].left == static_cast<int>(v)
                          ? nodes[static_cast<std::size_t>(u)].right
                          : nodes[static_cast<std::size_t>(u)].left;
        int a = nodes[v].left, b = nodes[v].right;
        // swap sibling with one child of v
        for (int keep : {a, b}) {
            int moved = keep == a ? b : a;
            std::vector<PhyloTree::Node> copy(nodes);
            copy[static_cast<std::size_t>(v)].left = keep;
            copy[static_cast<std::size_t>(v)].right = sibling;
            copy[static_cast<std::size_t>(u)].left = static_cast<int>(v);
            copy[static_cast<std::size_t>(u)].right = moved;
            out.push_back(PhyloTree::from_nodes(copy, t.root()));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

NniDistance nni_distance(const PhyloTree& a, const PhyloTree& b, int exact_limit_leaves) {
    if (a.leaf_count() != b.leaf_count())
        throw std::invalid_argument("nni_distance: leaf sets differ");
    if (a == b) return {0, true};
    if (a.leaf_count() > exact_limit_leaves)
        return {std::abs(a.height() - b.height()), false};

    // Bidirectional BFS, expanding the smaller frontier.
    std::unordered_map<PhyloTree, int> dist_a{{a, 0}}, dist_b{{b, 0}};
    std::deque<PhyloTree> frontier_a{a}, frontier_b{b};
    int depth_a = 0, depth_b = 0;
    while (!frontier_a.empty() && !frontier_b.empty()) {
        bool expand_a = frontier_a.size() <= frontier_b.size();
        auto& frontier = expand_a ? frontier_a : frontier_b;
        auto& mine = expand_a ? dist_a : dist_b;
        auto& theirs = expand_a ? dist_b : dist_a;
        int& depth = expand_a ? depth_a : depth_b;
        std::deque<PhyloTree> next;
        for (const auto& t : frontier) {
            for (auto& nb : nni_neighbors(t)) {
                if (mine.count(nb)) continue;
                auto hit = theirs.find(nb);
                if (hit != theirs.end()) return {depth + 1 + hit->second, true};
                mine.emplace(nb, depth + 1);
                next.push_back(std::move(nb));
            }
        }
        frontier = std::move(next);
        ++depth;
    }
    throw std::logic_error("NNI graph is connected; search must terminate");
}

namespace {

// Caterpillar chain (k, (k-1, (... (5, (3,4))...))) used by both negative
// constructions.
PhyloTree caterpillar_chain(int top) {
    PhyloTree chain = PhyloTree::join(PhyloTree::leaf(3), PhyloTree::leaf(4));
    for (int leaf = 5; leaf <= top; ++leaf)
        chain = PhyloTree::join(PhyloTree::leaf(leaf), chain);
    return chain;
}

}  // namespace

NniMoveDistantMatchings nni_move_distant_matchings(int n) {
    if (n < 7) throw std::invalid_argument("nni_move_distant_matchings: n >= 7 required");
    NniMoveDistantMatchings result;
    PhyloTree chain = caterpillar_chain(n + 1);
    result.tree1 =
        PhyloTree::join(PhyloTree::leaf(1), PhyloTree::join(PhyloTree::leaf(2), chain));
    result.tree2 =
        PhyloTree::join(PhyloTree::join(PhyloTree::leaf(1), PhyloTree::leaf(2)), chain);
    auto nbs = nni_neighbors(result.tree1);
    result.nni_adjacent = std::find(nbs.begin(), nbs.end(), result.tree2) != nbs.end();
    result.x1 = dh_encode(result.tree1);
    result.x2 = dh_encode(result.tree2);
    for (const auto& [a, b] : result.x1.pairs())
        if (!result.x2.contains(a, b)) ++result.differing_pairs;
    result.distance_lower_bound = (result.differing_pairs + 1) / 2;
    return result;
}

TranspositionDistantTrees transposition_distant_trees(int n) {
    if (n < 9) throw std::invalid_argument("transposition_distant_trees: n >= 9 required");
    TranspositionDistantTrees result;
    std::vector<std::pair<int, int>> pairs;
    pairs.emplace_back(3, 4);
    for (int leaf = 5; leaf <= n + 1; ++leaf) pairs.emplace_back(leaf, n + leaf - 3);
    pairs.emplace_back(2, 2 * n - 1);
    pairs.emplace_back(1, 2 * n);
    result.x1 = Matching::from_pairs(std::move(pairs));

    std::vector<int> img(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < 2 * n; ++i) img[static_cast<std::size_t>(i)] = i + 1;
    std::swap(img[0], img[static_cast<std::size_t>(2 * n - 2)]);  // transposition (1, 2n-1)
    result.x2 = act(Permutation(std::move(img)), result.x1);

    result.tree1 = dh_decode(result.x1);
    result.tree2 = dh_decode(result.x2);
    result.height1 = result.tree1.height();
    result.height2 = result.tree2.height();
    result.height_gap = std::abs(result.height1 - result.height2);
    return result;
}

Rat tree_fraction(int n) {
    if (n < 1) throw std::invalid_argument("tree_fraction: n >= 1 required");
    return make_rat(Int(4) * n, Int(2 * n + 2) * (2 * n + 1));
}

std::vector<PhyloTree> enumerate_trees(int m) {
    if (m < 2) throw std::invalid_argument("enumerate_trees: at least two leaves");
    std::vector<PhyloTree> out;
    for (const auto& x : enumerate_matchings(m - 1)) out.push_back(dh_decode(x));
    return out;
}

}  // namespace matchkern
