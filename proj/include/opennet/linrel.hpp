#pragma once

#include <Eigen/Dense>
#include <vector>

namespace opennet::linrel {

inline constexpr double kRankCutoffFactor = 1e-10;  // times the largest singular value
inline constexpr double kContainsTolerance = 1e-8;

// Orthonormal basis of the column space of `vectors`; rank decided by the
// singular-value cutoff, columns sign-normalized for determinism.
Eigen::MatrixXd canonicalSpan(const Eigen::MatrixXd& vectors);

// Orthonormal basis of the kernel of `constraints`.
Eigen::MatrixXd kernelOf(const Eigen::MatrixXd& constraints);

// Linear relation from a V-space to a W-space: a subspace of W x V, stored
// as an orthonormal span with the W block stacked over the V block.
class LinRelation {
public:
    // `span` columns generate the subspace (they need not be independent);
    // they are canonicalized on construction. Rows = dimW + dimV.
    LinRelation(int dimW, int dimV, const Eigen::MatrixXd& span);

    int dimW() const { return dimW_; }
    int dimV() const { return dimV_; }
    int ambientDim() const { return dimW_ + dimV_; }
    int subspaceDim() const { return static_cast<int>(span_.cols()); }
    const Eigen::MatrixXd& span() const { return span_; }

    static LinRelation zeroSubspace(int dimW, int dimV);
    static LinRelation full(int dimW, int dimV);

private:
    int dimW_ = 0;
    int dimV_ = 0;
    Eigen::MatrixXd span_;  // orthonormal columns
};

// {(w, v) : w = matrix * v}.
LinRelation graphOf(const Eigen::MatrixXd& matrix);

// Relational composite: {(z, x) : exists y with (z,y) in outer, (y,x) in
// inner}, computed by intersecting the two constraint systems inside
// Z x Y x X and projecting out the middle block.
LinRelation composeRel(const LinRelation& outer, const LinRelation& inner);

// Blockwise relation between direct sums: members are pairs of block
// vectors ((v_x), (w_y)) such that every (v_x, w_{indexMap[x]}) lies in
// components[x]. `sourceDims` lists the dimensions of all source blocks,
// including ones the index map misses.
LinRelation blockwiseRelation(const std::vector<int>& indexMap,
                              const std::vector<LinRelation>& components,
                              const std::vector<int>& sourceDims);

// True iff every basis vector of `inner` lies in the span of `outer`.
bool contains(const LinRelation& outer, const LinRelation& inner,
              double tolerance = kContainsTolerance);

bool equal(const LinRelation& a, const LinRelation& b,
           double tolerance = kContainsTolerance);

}  // namespace opennet::linrel
