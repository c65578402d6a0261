#include "opennet/linrel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace opennet::linrel {

namespace {

// Flips each column so its largest-magnitude entry is positive, making the
// basis deterministic across runs and platforms.
void signNormalize(Eigen::MatrixXd& basis) {
    for (Eigen::Index col = 0; col < basis.cols(); ++col) {
        Eigen::Index lead = 0;
        basis.col(col).cwiseAbs().maxCoeff(&lead);
        if (basis(lead, col) < 0.0) basis.col(col) = -basis.col(col);
    }
}

}  // namespace

Eigen::MatrixXd canonicalSpan(const Eigen::MatrixXd& vectors) {
    if (vectors.rows() == 0 || vectors.cols() == 0) {
        return Eigen::MatrixXd(vectors.rows(), 0);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vectors, Eigen::ComputeFullU);
    const auto& singular = svd.singularValues();
    const double cutoff =
        singular.size() == 0 ? 0.0 : kRankCutoffFactor * singular(0);
    Eigen::Index rank = 0;
    while (rank < singular.size() && singular(rank) > cutoff) ++rank;
    Eigen::MatrixXd basis = svd.matrixU().leftCols(rank);
    signNormalize(basis);
    return basis;
}

Eigen::MatrixXd kernelOf(const Eigen::MatrixXd& constraints) {
    if (constraints.cols() == 0) {
        return Eigen::MatrixXd(0, 0);
    }
    if (constraints.rows() == 0) {
        return Eigen::MatrixXd::Identity(constraints.cols(), constraints.cols());
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
    const auto& singular = svd.singularValues();
    const double cutoff =
        singular.size() == 0 ? 0.0 : kRankCutoffFactor * singular(0);
    Eigen::Index rank = 0;
    while (rank < singular.size() && singular(rank) > cutoff) ++rank;
    Eigen::MatrixXd basis = svd.matrixV().rightCols(constraints.cols() - rank);
    signNormalize(basis);
    return basis;
}

LinRelation::LinRelation(int dimW, int dimV, const Eigen::MatrixXd& span)
    : dimW_(dimW), dimV_(dimV) {
    if (dimW_ < 0 || dimV_ < 0) {
        throw std::invalid_argument("relation dimensions must be nonnegative");
    }
    if (span.rows() != ambientDim()) {
        std::ostringstream os;
        os << "span has " << span.rows() << " rows but the ambient dimension is "
           << ambientDim();
        throw std::invalid_argument(os.str());
    }
    span_ = canonicalSpan(span);
}

LinRelation LinRelation::zeroSubspace(int dimW, int dimV) {
    return LinRelation(dimW, dimV, Eigen::MatrixXd(dimW + dimV, 0));
}

LinRelation LinRelation::full(int dimW, int dimV) {
    return LinRelation(dimW, dimV,
                       Eigen::MatrixXd::Identity(dimW + dimV, dimW + dimV));
}

LinRelation graphOf(const Eigen::MatrixXd& matrix) {
    const Eigen::Index w = matrix.rows();
    const Eigen::Index v = matrix.cols();
    Eigen::MatrixXd span(w + v, v);
    span.topRows(w) = matrix;
    span.bottomRows(v) = Eigen::MatrixXd::Identity(v, v);
    return LinRelation(static_cast<int>(w), static_cast<int>(v), span);
}

LinRelation composeRel(const LinRelation& outer, const LinRelation& inner) {
    if (outer.dimV() != inner.dimW()) {
        std::ostringstream os;
        os << "relations do not compose: middle dimensions " << outer.dimV()
           << " and " << inner.dimW() << " differ";
        throw std::invalid_argument(os.str());
    }
    const int z = outer.dimW();
    const int y = outer.dimV();
    const int x = inner.dimV();

    // Constraints on (z, y, x): membership in each relation is vanishing of
    // the projection onto the relation's orthogonal complement.
    const Eigen::MatrixXd outerComplement = kernelOf(outer.span().transpose());
    const Eigen::MatrixXd innerComplement = kernelOf(inner.span().transpose());
    const Eigen::Index outerRows = outerComplement.cols();
    const Eigen::Index innerRows = innerComplement.cols();
    // The complements live in Z x Y and Y x X; shifting the second block by
    // z aligns both inside Z x Y x X.
    Eigen::MatrixXd constraints =
        Eigen::MatrixXd::Zero(outerRows + innerRows, z + y + x);
    constraints.block(0, 0, outerRows, z + y) = outerComplement.transpose();
    constraints.block(outerRows, z, innerRows, y + x) = innerComplement.transpose();

    const Eigen::MatrixXd intersection = kernelOf(constraints);
    Eigen::MatrixXd projected(z + x, intersection.cols());
    projected.topRows(z) = intersection.topRows(z);
    projected.bottomRows(x) = intersection.bottomRows(x);
    return LinRelation(z, x, projected);
}

LinRelation blockwiseRelation(const std::vector<int>& indexMap,
                              const std::vector<LinRelation>& components,
                              const std::vector<int>& sourceDims) {
    if (indexMap.size() != components.size()) {
        throw std::invalid_argument(
            "blockwise relation needs one component per index-map entry");
    }
    for (int d : sourceDims) {
        if (d < 0) throw std::invalid_argument("negative source block dimension");
    }
    std::vector<int> sourceOffsets(sourceDims.size() + 1, 0);
    for (std::size_t y = 0; y < sourceDims.size(); ++y) {
        sourceOffsets[y + 1] = sourceOffsets[y] + sourceDims[y];
    }
    const int sourceTotal = sourceOffsets.back();

    std::vector<int> targetOffsets(components.size() + 1, 0);
    for (std::size_t i = 0; i < components.size(); ++i) {
        targetOffsets[i + 1] = targetOffsets[i] + components[i].dimW();
    }
    const int targetTotal = targetOffsets.back();
    const int ambient = targetTotal + sourceTotal;

    Eigen::Index constraintRows = 0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const int y = indexMap[i];
        if (y < 0 || y >= static_cast<int>(sourceDims.size())) {
            throw std::invalid_argument("index map entry outside the source family");
        }
        if (components[i].dimV() != sourceDims[static_cast<std::size_t>(y)]) {
            std::ostringstream os;
            os << "component " << i << " expects a source block of dimension "
               << components[i].dimV() << " but block " << y << " has dimension "
               << sourceDims[static_cast<std::size_t>(y)];
            throw std::invalid_argument(os.str());
        }
        constraintRows += components[i].ambientDim() - components[i].subspaceDim();
    }

    Eigen::MatrixXd constraints = Eigen::MatrixXd::Zero(constraintRows, ambient);
    Eigen::Index row = 0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const int y = indexMap[i];
        const Eigen::MatrixXd complement = kernelOf(components[i].span().transpose());
        const Eigen::Index rows = complement.cols();
        const int w = components[i].dimW();
        const int v = components[i].dimV();
        // complement rows act on (target block i, source block y)
        constraints.block(row, targetOffsets[i], rows, w) =
            complement.transpose().leftCols(w);
        constraints.block(row, targetTotal + sourceOffsets[static_cast<std::size_t>(y)],
                          rows, v) = complement.transpose().rightCols(v);
        row += rows;
    }
    return LinRelation(targetTotal, sourceTotal, kernelOf(constraints));
}

bool contains(const LinRelation& outer, const LinRelation& inner,
              double tolerance) {
    if (outer.dimW() != inner.dimW() || outer.dimV() != inner.dimV()) {
        throw std::invalid_argument(
            "containment requires matching ambient dimensions");
    }
    const Eigen::MatrixXd& basis = outer.span();
    for (Eigen::Index col = 0; col < inner.span().cols(); ++col) {
        const Eigen::VectorXd vector = inner.span().col(col);
        const Eigen::VectorXd residual = vector - basis * (basis.transpose() * vector);
        if (residual.norm() > tolerance) return false;
    }
    return true;
}

bool equal(const LinRelation& a, const LinRelation& b, double tolerance) {
    return a.subspaceDim() == b.subspaceDim() && contains(a, b, tolerance) &&
           contains(b, a, tolerance);
}

}  // namespace opennet::linrel
