#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fxtails/similarity.hpp"

namespace fxtails {

enum class Linkage { complete, single, average };

std::string to_string(Linkage l);
Linkage parse_linkage(const std::string& text);

struct Merge {
    // Cluster ids: leaves are 0..N-1, the k-th merge creates id N+k.
    std::size_t a = 0;
    std::size_t b = 0;
    double height = 0.0;
};

struct Dendrogram {
    std::vector<std::string> leaves;
    std::vector<Merge> merges;
};

// Partition of the leaves produced by cutting a dendrogram.
struct ClusterCut {
    double threshold = 0.0;
    // Clusters as leaf-index lists, ordered by each cluster's first leaf.
    std::vector<std::vector<std::size_t>> clusters;
    // labels[leaf] = index into `clusters`.
    std::vector<std::size_t> labels;
    std::size_t n_nontrivial = 0;
};

// Standard agglomerative clustering: repeatedly merge the closest pair of
// clusters under the linkage rule until one remains. Ties go to the
// lexicographically smallest (a, b) id pair. Average linkage is the unweighted
// mean over all cross pairs. Throws ValidationError on asymmetric, negative,
// or nonzero-diagonal input.
Dendrogram agglomerate(const DistanceMatrix& dist, Linkage linkage);

// Removes every merge with height >= d_th; connected remnants are the
// clusters. Requires d_th > 0.
ClusterCut cut_threshold(const Dendrogram& dend, double d_th);

// Scans thresholds at midpoints between consecutive distinct merge heights
// (plus half the smallest height) and returns the cut maximizing the number of
// clusters with >= 2 members; ties resolve toward the smaller threshold.
ClusterCut max_cluster_cut(const Dendrogram& dend);

// Newick serialization with branch lengths equal to height differences and
// children ordered by their smallest leaf name.
std::string export_newick(const Dendrogram& dend);

// Inverse of export_newick for binary trees with branch lengths. Leaves are
// numbered in order of appearance; merges are ordered by height.
Dendrogram parse_newick(const std::string& text);

}  // namespace fxtails
