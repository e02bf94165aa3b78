#include "flagfold/stratify.hpp"

namespace flagfold {

bool coarser(const FlagType& J, const FlagType& I) {
  require(is_valid_type(J, J.n()) && is_valid_type(I, I.n()), "coarser: invalid type");
  require(J.n() == I.n(), "coarser: types partition different n");

  // Parts are positive, so segment sums are strictly increasing: greedily
  // accumulate q's until each p is matched exactly.
  std::size_t j = 0;
  for (int p : I.parts) {
    int acc = 0;
    while (acc < p && j < J.parts.size()) acc += J.parts[j++];
    if (acc != p) return false;
  }
  return j == J.parts.size();
}

FlagRep project_flag(const FlagRep& rep, const FlagType& J, const FlagType& I) {
  require(rep.n() == J.n(), "project_flag: frame size does not match type J");
  require(coarser(J, I), "project_flag: target type is not coarser");
  // The same orthogonal matrix represents the coarser flag; only the grouping
  // of columns changes, which is carried by the type, not the frame.
  return rep;
}

BlockIndexSet block_indices(const FlagType& I) {
  require(is_valid_type(I, I.n()), "block_indices: invalid type");
  BlockIndexSet X;
  const std::vector<int> d = I.cuts();
  for (std::size_t k = 0; k + 1 < d.size(); ++k)
    for (int i = d[k] + 1; i <= d[k + 1]; ++i)
      for (int j = i + 1; j <= d[k + 1]; ++j) X.pairs.insert({i, j});
  return X;
}

Matrix horizontal_project(const Matrix& B, const FlagType& I) {
  require(B.rows() == B.cols(), "horizontal_project: matrix must be square");
  require(B.rows() == I.n(), "horizontal_project: size does not match type");
  require(is_skew(B), "horizontal_project: matrix is not skew-symmetric");

  Matrix out = B;
  for (const auto& [i, j] : block_indices(I).pairs) {
    out(i - 1, j - 1) = 0.0;
    out(j - 1, i - 1) = 0.0;
  }
  return out;
}

CellKey cell_of(const Vector& mu, double zero_tol) {
  require(is_simplex_point(mu), "cell_of: input is not a simplex point");
  CellKey key;
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (mu[i] > zero_tol) key.K.insert(static_cast<int>(i) + 1);
  require(!key.K.empty(), "cell_of: empty support");

  // Guard against tolerance bugs: the cell's type must agree with type_of.
  const FlagType from_mu = type_of(mu, zero_tol);
  const FlagType from_key = type_of_cell(key, static_cast<int>(mu.size()));
  if (!(from_mu == from_key))
    throw numerical_error("cell_of: cell type disagrees with type_of");
  return key;
}

FlagType type_of_cell(const CellKey& key, int n) {
  require(!key.K.empty(), "type_of_cell: empty key");
  require(*key.K.rbegin() <= n && *key.K.begin() >= 1, "type_of_cell: key out of range");
  FlagType I;
  int prev = 0;
  for (int d : key.K) {
    I.parts.push_back(d - prev);
    prev = d;
  }
  if (prev < n) I.parts.push_back(n - prev);
  return I;
}

}  // namespace flagfold
