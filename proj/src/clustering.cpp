#include "fxtails/clustering.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "fxtails/csv.hpp"
#include "fxtails/errors.hpp"

namespace fxtails {

std::string to_string(Linkage l) {
    switch (l) {
        case Linkage::complete: return "complete";
        case Linkage::single: return "single";
        case Linkage::average: return "average";
    }
    throw ConfigError("unknown linkage");
}

Linkage parse_linkage(const std::string& text) {
    if (text == "complete") return Linkage::complete;
    if (text == "single") return Linkage::single;
    if (text == "average") return Linkage::average;
    throw ConfigError("unknown linkage '" + text + "'");
}

namespace {

void validate_distance_input(const DistanceMatrix& dist) {
    const std::size_t n = dist.size();
    if (n < 2) throw ValidationError("agglomerate: need at least 2 items");
    if (dist.d.size() != n)
        throw ValidationError("agglomerate: matrix does not match code count");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist.d[i].size() != n)
            throw ValidationError("agglomerate: matrix is not square");
        if (dist.d[i][i] != 0.0)
            throw ValidationError("agglomerate: nonzero diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            if (dist.d[i][j] < 0.0)
                throw ValidationError("agglomerate: negative distance");
            if (dist.d[i][j] != dist.d[j][i])
                throw ValidationError("agglomerate: asymmetric distance matrix");
        }
    }
}

}  // namespace

Dendrogram agglomerate(const DistanceMatrix& dist, Linkage linkage) {
    validate_distance_input(dist);
    const std::size_t n = dist.size();
    const std::size_t total = 2 * n - 1;

    // Dense id-indexed working matrix; row/col N+k is filled when merge k
    // happens. Quadratic scans are fine at panel scale.
    std::vector<std::vector<double>> d(total, std::vector<double>(total, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i][j] = dist.d[i][j];

    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;
    std::vector<std::size_t> size(total, 1);

    Dendrogram out;
    out.leaves = dist.codes;
    out.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < active.size(); ++i)
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const double dij = d[active[i]][active[j]];
                // Active ids are kept sorted, so the first minimum seen is the
                // lexicographically smallest (a, b) pair.
                if (dij < best) {
                    best = dij;
                    bi = i;
                    bj = j;
                }
            }
        const std::size_t a = active[bi];
        const std::size_t b = active[bj];
        const std::size_t merged = n + step;

        for (std::size_t id : active) {
            if (id == a || id == b) continue;
            double nd = 0.0;
            switch (linkage) {
                case Linkage::single: nd = std::min(d[a][id], d[b][id]); break;
                case Linkage::complete: nd = std::max(d[a][id], d[b][id]); break;
                case Linkage::average:
                    nd = (static_cast<double>(size[a]) * d[a][id] +
                          static_cast<double>(size[b]) * d[b][id]) /
                         static_cast<double>(size[a] + size[b]);
                    break;
            }
            d[merged][id] = nd;
            d[id][merged] = nd;
        }
        size[merged] = size[a] + size[b];

        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(bi));
        active.push_back(merged);

        out.merges.push_back(Merge{a, b, best});
    }
    return out;
}

namespace {

struct Dsu {
    std::vector<std::size_t> parent;
    explicit Dsu(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

ClusterCut cut_at(const Dendrogram& dend, double d_th) {
    const std::size_t n = dend.leaves.size();
    Dsu dsu(n + dend.merges.size());
    for (std::size_t k = 0; k < dend.merges.size(); ++k) {
        const Merge& m = dend.merges[k];
        if (m.height < d_th) {
            dsu.unite(m.a, n + k);
            dsu.unite(m.b, n + k);
        }
    }
    ClusterCut cut;
    cut.threshold = d_th;
    cut.labels.resize(n);
    std::vector<std::size_t> root_to_cluster(n + dend.merges.size(),
                                             std::numeric_limits<std::size_t>::max());
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        const std::size_t root = dsu.find(leaf);
        if (root_to_cluster[root] == std::numeric_limits<std::size_t>::max()) {
            root_to_cluster[root] = cut.clusters.size();
            cut.clusters.emplace_back();
        }
        const std::size_t c = root_to_cluster[root];
        cut.clusters[c].push_back(leaf);
        cut.labels[leaf] = c;
    }
    for (const auto& members : cut.clusters)
        if (members.size() >= 2) ++cut.n_nontrivial;
    return cut;
}

}  // namespace

ClusterCut cut_threshold(const Dendrogram& dend, double d_th) {
    if (!(d_th > 0.0)) throw ConfigError("cut_threshold: d_th must be positive");
    return cut_at(dend, d_th);
}

ClusterCut max_cluster_cut(const Dendrogram& dend) {
    if (dend.leaves.size() < 2 || dend.merges.empty())
        throw ValidationError("max_cluster_cut: need at least 2 leaves");

    std::vector<double> heights;
    heights.reserve(dend.merges.size());
    for (const Merge& m : dend.merges) heights.push_back(m.height);
    std::sort(heights.begin(), heights.end());
    heights.erase(std::unique(heights.begin(), heights.end()), heights.end());

    std::vector<double> candidates;
    if (heights.front() > 0.0) candidates.push_back(heights.front() / 2.0);
    for (std::size_t i = 0; i + 1 < heights.size(); ++i)
        candidates.push_back(0.5 * (heights[i] + heights[i + 1]));

    if (candidates.empty()) {
        // Every merge sits at height zero; no positive threshold separates
        // anything, so report the all-singleton side.
        ClusterCut cut = cut_at(dend, 0.0);
        cut.threshold = 0.0;
        return cut;
    }

    ClusterCut best;
    bool have = false;
    for (double c : candidates) {
        ClusterCut cut = cut_at(dend, c);
        if (!have || cut.n_nontrivial > best.n_nontrivial) {
            best = std::move(cut);
            have = true;
        }
    }
    return best;
}

namespace {

struct NewickNode {
    // Leaf when children empty.
    std::string name;
    double height = 0.0;
    std::vector<std::size_t> children;   // node indices
    std::vector<double> child_lengths;   // parallel to children
    std::string min_leaf;                // smallest leaf name in the subtree
};

void serialize_node(const std::vector<NewickNode>& nodes, std::size_t idx,
                    std::string& out) {
    const NewickNode& node = nodes[idx];
    if (node.children.empty()) {
        out += node.name;
        return;
    }
    // Children sorted by smallest contained leaf name for a canonical layout.
    std::vector<std::size_t> order(node.children.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return nodes[node.children[x]].min_leaf < nodes[node.children[y]].min_leaf;
    });
    out += '(';
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) out += ',';
        serialize_node(nodes, node.children[order[i]], out);
        out += ':';
        out += format_double(node.child_lengths[order[i]]);
    }
    out += ')';
}

}  // namespace

std::string export_newick(const Dendrogram& dend) {
    const std::size_t n = dend.leaves.size();
    if (n == 0) throw ValidationError("export_newick: empty dendrogram");
    std::vector<NewickNode> nodes(n + dend.merges.size());
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i].name = dend.leaves[i];
        nodes[i].min_leaf = dend.leaves[i];
    }
    for (std::size_t k = 0; k < dend.merges.size(); ++k) {
        const Merge& m = dend.merges[k];
        NewickNode& node = nodes[n + k];
        node.height = m.height;
        for (std::size_t child : {m.a, m.b}) {
            if (child >= n + k)
                throw ValidationError("export_newick: merge references later cluster");
            node.children.push_back(child);
            node.child_lengths.push_back(m.height - nodes[child].height);
        }
        node.min_leaf = std::min(nodes[m.a].min_leaf, nodes[m.b].min_leaf);
    }
    std::string out;
    serialize_node(nodes, nodes.size() - 1, out);
    out += ';';
    return out;
}

namespace {

struct NewickParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit NewickParser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("newick: " + what + " at offset " + std::to_string(pos));
    }
    char peek() const {
        if (pos >= text.size()) throw ParseError("newick: unexpected end of input");
        return text[pos];
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    double parse_length() {
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr == first) fail("bad branch length");
        pos += static_cast<std::size_t>(ptr - first);
        return value;
    }

    struct Sub {
        std::size_t node;
        double height;
    };

    std::vector<std::string> leaves;
    std::vector<Merge> merges;

    // Returns the subtree's node id under the scipy numbering applied after
    // the full parse: leaves keep their appearance index, merge k maps to
    // leaves.size() + k. During parsing merge ids are offset by a sentinel.
    static constexpr std::size_t kMergeBit = std::size_t{1} << 62;

    Sub parse_subtree() {
        if (peek() == '(') {
            ++pos;
            Sub left = parse_subtree();
            expect(':');
            const double llen = parse_length();
            expect(',');
            Sub right = parse_subtree();
            expect(':');
            const double rlen = parse_length();
            expect(')');
            const double height = left.height + llen;
            const double alt = right.height + rlen;
            if (std::abs(height - alt) > 1e-9 * std::max(1.0, std::abs(height)))
                fail("children disagree on merge height");
            const std::size_t id = kMergeBit | merges.size();
            merges.push_back(Merge{left.node, right.node, height});
            return Sub{id, height};
        }
        std::string name;
        while (pos < text.size()) {
            const char c = text[pos];
            if (c == ':' || c == ',' || c == ')' || c == '(' || c == ';') break;
            if (std::isspace(static_cast<unsigned char>(c))) break;
            name += c;
            ++pos;
        }
        if (name.empty()) fail("expected leaf name");
        leaves.push_back(name);
        return Sub{leaves.size() - 1, 0.0};
    }
};

}  // namespace

Dendrogram parse_newick(const std::string& text) {
    NewickParser parser(text);
    NewickParser::Sub root = parser.parse_subtree();
    parser.expect(';');
    if (parser.pos != text.size())
        throw ParseError("newick: trailing characters after ';'");
    if ((root.node & NewickParser::kMergeBit) == 0 && parser.leaves.size() > 1)
        throw ParseError("newick: tree does not reduce to one root");

    const std::size_t n = parser.leaves.size();

    // Reorder merges by height (children always sit below their parents in
    // the monotone trees this writes) and renumber ids scipy-style.
    std::vector<std::size_t> order(parser.merges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return parser.merges[x].height < parser.merges[y].height;
    });
    std::vector<std::size_t> new_id(parser.merges.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        new_id[order[rank]] = n + rank;

    auto map_id = [&](std::size_t id) {
        if (id & NewickParser::kMergeBit)
            return new_id[id & ~NewickParser::kMergeBit];
        return id;
    };

    Dendrogram out;
    out.leaves = std::move(parser.leaves);
    out.merges.reserve(parser.merges.size());
    for (std::size_t idx : order) {
        const Merge& m = parser.merges[idx];
        const std::size_t a = map_id(m.a);
        const std::size_t b = map_id(m.b);
        out.merges.push_back(Merge{std::min(a, b), std::max(a, b), m.height});
    }
    return out;
}

}  // namespace fxtails
