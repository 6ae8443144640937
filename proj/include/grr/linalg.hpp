#pragma once

#include <cstddef>
#include <unordered_map>
#include <utility>
#include <vector>

namespace grr {

/// Sparse vector: (index, value) pairs sorted by index, no stored zeros.
template <class Field>
using SparseVec = std::vector<std::pair<std::size_t, typename Field::value_type>>;

/// a + c*b for sorted sparse vectors.
template <class Field>
SparseVec<Field> axpy(const Field& field, const SparseVec<Field>& a,
                      const typename Field::value_type& c, const SparseVec<Field>& b) {
  SparseVec<Field> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, field.mul(c, b[j].second));
      ++j;
    } else {
      auto v = field.add(a[i].second, field.mul(c, b[j].second));
      if (!field.is_zero(v)) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

/// Incremental column reduction (pivot = largest row index). Columns are fed
/// one at a time; independent columns become pivots, dependent ones reduce to
/// zero and, when tracking is on, leave a kernel vector in column coordinates.
template <class Field>
class ColumnReducer {
 public:
  using value_type = typename Field::value_type;
  using Vec = SparseVec<Field>;

  explicit ColumnReducer(Field field, bool track_kernel = false)
      : field_(std::move(field)), track_(track_kernel) {}

  /// Returns true when the column is independent of the ones seen so far.
  bool add_column(Vec column) {
    std::size_t index = columns_++;
    Vec combo;
    if (track_) combo.emplace_back(index, field_.one());
    while (!column.empty()) {
      std::size_t row = column.back().first;
      auto it = pivots_.find(row);
      if (it == pivots_.end()) {
        pivots_.emplace(row, Pivot{std::move(column), std::move(combo)});
        return true;
      }
      const Pivot& p = it->second;
      value_type c = field_.neg(field_.div(column.back().second, p.column.back().second));
      column = axpy(field_, column, c, p.column);
      if (track_) combo = axpy(field_, combo, c, p.combo);
    }
    if (track_) kernel_.push_back(std::move(combo));
    return false;
  }

  std::size_t rank() const { return pivots_.size(); }
  std::size_t columns() const { return columns_; }
  std::size_t nullity() const { return columns_ - pivots_.size(); }
  const std::vector<Vec>& kernel() const { return kernel_; }

 private:
  struct Pivot {
    Vec column;
    Vec combo;
  };
  Field field_;
  bool track_;
  std::size_t columns_ = 0;
  std::unordered_map<std::size_t, Pivot> pivots_;
  std::vector<Vec> kernel_;
};

/// Rank of a list of sparse columns.
template <class Field>
std::size_t sparse_rank(const Field& field, std::vector<SparseVec<Field>> columns) {
  ColumnReducer<Field> reducer(field);
  for (auto& c : columns) reducer.add_column(std::move(c));
  return reducer.rank();
}

}  // namespace grr
