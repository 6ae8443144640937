#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "grr/field.hpp"
#include "grr/linalg.hpp"
#include "grr/sheaf.hpp"

namespace grr {

struct ExactnessReport {
  bool ok = true;
  std::size_t checks = 0;
  std::vector<std::string> violations;

  void record(bool good, const std::string& what) {
    ++checks;
    if (!good) {
      ok = false;
      violations.push_back(what);
    }
  }
  void merge(const ExactnessReport& o) {
    ok = ok && o.ok;
    checks += o.checks;
    violations.insert(violations.end(), o.violations.begin(), o.violations.end());
  }
};

namespace detail {

template <class Field>
class BasisIndex {
 public:
  std::size_t operator[](BasisVec v) { return index_.try_emplace(v, index_.size()).first->second; }
  SparseVec<Field> vec(const Field& field, const IntCombo& c) {
    std::map<std::size_t, typename Field::value_type> m;
    for (const auto& [v, x] : c) m[(*this)[v]] = field.from_int(x);
    SparseVec<Field> out;
    for (auto& [i, x] : m)
      if (!field.is_zero(x)) out.emplace_back(i, x);
    return out;
  }

 private:
  std::map<BasisVec, std::size_t> index_;
};

template <class Field>
std::size_t rank_of(const Field& field, const std::vector<IntCombo>& cols) {
  BasisIndex<Field> ix;
  ColumnReducer<Field> red(field);
  for (const auto& c : cols) red.add_column(ix.vec(field, c));
  return red.rank();
}

}  // namespace detail

/// Exactness of X --in--> Y --out--> Z at one object on the basis vectors
/// with |exponent| <= w. Either map may be null (zero neighbour).
template <class Field = RationalField>
ExactnessReport check_exact_window(const MonomialMap* in, const MonomialMap* out, std::int64_t w,
                                   const std::string& where, const Field& field = {}) {
  ExactnessReport rep;
  std::vector<BasisVec> yw;
  if (in) yw = in->target.window(w);
  else if (out) yw = out->source.window(w);
  std::set<BasisVec> yset(yw.begin(), yw.end());

  if (in) {
    auto xw = in->source.window(w);
    std::vector<IntCombo> imgs;
    for (auto x : xw) imgs.push_back(in->apply(x));
    rep.record(detail::rank_of(field, imgs) == xw.size(), where + ": first map not injective");
    if (out) {
      bool zero = true;
      for (const auto& c : imgs) zero = zero && out->apply(c).empty();
      rep.record(zero, where + ": composite is not zero");
    }
  }

  // ker(out) inside span(Yw) against im(in) of sources landing in Yw
  {
    std::size_t kernel = yw.size();
    if (out) {
      std::vector<IntCombo> cols;
      for (auto y : yw) cols.push_back(out->apply(y));
      kernel = yw.size() - detail::rank_of(field, cols);
    }
    std::size_t image = 0;
    if (in) {
      std::set<BasisVec> xs;
      for (auto x : in->source.window(w)) xs.insert(x);
      for (auto y : yw)
        for (auto x : in->preimages(y)) xs.insert(x);
      std::vector<IntCombo> cols;
      for (auto x : xs) {
        IntCombo c = in->apply(x);
        bool inside = true;
        for (const auto& [v, _] : c) inside = inside && yset.count(v);
        if (inside) cols.push_back(std::move(c));
      }
      image = detail::rank_of(field, cols);
    }
    rep.record(kernel == image, where + ": kernel dim " + std::to_string(kernel) + " != image dim " + std::to_string(image));
  }

  if (out) {
    auto zw = out->target.window(w);
    std::set<BasisVec> ys(yw.begin(), yw.end());
    for (auto z : zw)
      for (auto y : out->preimages(z)) ys.insert(y);
    std::vector<IntCombo> cols;
    for (auto y : ys) cols.push_back(out->apply(y));
    std::size_t base = detail::rank_of(field, cols);
    for (auto z : zw) cols.push_back(IntCombo{{z, 1}});
    rep.record(detail::rank_of(field, cols) == base, where + ": second map not surjective");
  }
  return rep;
}

/// Window exactness of 0 -> sub -> mid -> quot -> 0 at every object, plus
/// morphism validity of both maps.
template <class Field = RationalField>
ExactnessReport check_ses_window(const SheafMorphism& mu, const SheafMorphism& q, std::int64_t w,
                                 const Field& field = {}) {
  ExactnessReport rep;
  for (const SheafMorphism* m : {&mu, &q}) {
    auto v = validate_morphism(*m, w);
    rep.record(v.ok, v.law + ": " + v.message);
  }
  for (Obj o : kObjects) rep.merge(check_exact_window(&mu.at(o), &q.at(o), w, obj_name(o), field));
  return rep;
}

}  // namespace grr
