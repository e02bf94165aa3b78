#ifndef FLAGFOLD_STRATIFY_HPP
#define FLAGFOLD_STRATIFY_HPP

#include "flagfold/flagcore.hpp"
#include "flagfold/types.hpp"

#include <set>
#include <utility>

namespace flagfold {

/// Index pairs (i, j), 1-based with i < j, lying strictly inside one diagonal
/// block of a flag type.
struct BlockIndexSet {
  std::set<std::pair<int, int>> pairs;
};

/// Support of the weight vector; identifies the cell M(r; K) of the
/// stratification containing a weighted flag.
struct CellKey {
  std::set<int> K;  // 1-based indices of the positive weights
};

/// True iff J is a subpartition of I (the partial order J <= I on types).
bool coarser(const FlagType& J, const FlagType& I);

/// Reinterpret a type-J representative as a type-I flag. The frame is
/// unchanged; the I-flag's subspaces are unions of consecutive J-blocks.
FlagRep project_flag(const FlagRep& rep, const FlagType& J, const FlagType& I);

/// All pairs strictly inside the diagonal blocks of I.
BlockIndexSet block_indices(const FlagType& I);

/// Orthogonal projection of a skew matrix onto the horizontal space of I:
/// zeroes every entry indexed by block_indices(I).
Matrix horizontal_project(const Matrix& B, const FlagType& I);

/// Support K of mu; cross-checked against type_of so a tolerance mismatch
/// fails loudly instead of silently misclassifying the cell.
CellKey cell_of(const Vector& mu, double zero_tol = kDefaultZeroTol);

/// Type I(K) determined by a cell key in ambient dimension n.
FlagType type_of_cell(const CellKey& key, int n);

}  // namespace flagfold

#endif
