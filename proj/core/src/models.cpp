#include "kfib/models.hpp"

#include <algorithm>
#include <set>

namespace kfib {

namespace {

const std::string kLineName = "t";

void require_on_base(const ModelPtr& base, const DivisorClass& cls, const std::string& what) {
  for (const auto& [g, v] : cls.terms())
    if (!base->has_generator(g))
      throw DimensionMismatch(what + ": class uses generator '" + g +
                              "' which is not on the base");
}

// The base product extended by the compactified line direction.
ModelPtr extend_base_by_line(const ModelPtr& base) {
  if (base->has_generator(kLineName))
    throw std::invalid_argument("base generator name '" + kLineName +
                                "' collides with the line direction");
  std::vector<int> dims;
  std::vector<std::string> names;
  for (const auto& f : base->factors()) {
    dims.push_back(f.dim);
    names.push_back(f.name);
  }
  dims.push_back(1);
  names.push_back(kLineName);
  return build_projective_product(dims, names);
}

// Construction-time invariant: the relatively ample class of the family
// restricts on a general fibre of the line to H, and the pulled-back base
// polarization is nilpotent at order n + 1.
void check_family_classes(const FibrationDegeneration& d) {
  const auto& X = *d.parent.total;
  const auto& W = *d.total_model;
  const int nm = d.parent.n + d.parent.m;
  for (int a = 0; a <= nm; ++a) {
    std::vector<DivisorClass> on_family(static_cast<size_t>(a), d.Hcal);
    on_family.insert(on_family.end(), static_cast<size_t>(nm - a), d.Lcal);
    on_family.push_back(d.central_slice);
    std::vector<DivisorClass> on_fibre(static_cast<size_t>(a), d.parent.H);
    on_fibre.insert(on_fibre.end(), static_cast<size_t>(nm - a), d.parent.L);
    if (intersect(W, on_family) != intersect(X, on_fibre))
      throw std::logic_error("family classes do not restrict to the fibration classes");
  }
  std::vector<DivisorClass> nilpotency(static_cast<size_t>(d.parent.n + 1), d.Lcal);
  nilpotency.insert(nilpotency.end(), static_cast<size_t>(d.parent.m), d.Hcal);
  if (intersect(W, nilpotency) != 0)
    throw std::logic_error("pulled-back base polarization is not nilpotent at order n+1");
}

}  // namespace

DivisorClass SplitBundle::first_chern() const {
  DivisorClass out;
  for (const auto& s : summands) out += s;
  return out;
}

SplitBundle make_split_bundle(const ModelPtr& base,
                              const std::vector<std::vector<Rational>>& degrees) {
  if (!base) throw std::invalid_argument("split bundle: null base");
  if (base->bundle() || base->blowup())
    throw std::invalid_argument("split bundle: base must be a product of projective spaces");
  if (degrees.empty()) throw EmptyBundle("split bundle with no summands");
  SplitBundle out;
  out.base = base;
  const auto& factors = base->factors();
  for (const auto& row : degrees) {
    if (row.size() != factors.size())
      throw DimensionMismatch("split bundle: degree vector has " + std::to_string(row.size()) +
                              " entries for " + std::to_string(factors.size()) + " base factors");
    DivisorClass cls;
    for (size_t f = 0; f < row.size(); ++f) cls += DivisorClass(factors[f].name, row[f]);
    out.summands.push_back(cls);
  }
  return out;
}

Rational slope_sheaf(const SplitBundle& bundle, const DivisorClass& L) {
  std::vector<int> all(static_cast<size_t>(bundle.rank()));
  for (int i = 0; i < bundle.rank(); ++i) all[static_cast<size_t>(i)] = i;
  return slope_sheaf(bundle, all, L);
}

Rational slope_sheaf(const SplitBundle& bundle, const std::vector<int>& subset,
                     const DivisorClass& L) {
  if (subset.empty()) throw TrivialSubsheaf("slope of an empty sub-direct-sum");
  const int n = bundle.base->dimension();
  if (n < 1) throw std::invalid_argument("slope needs a positive-dimensional base");
  require_on_base(bundle.base, L, "slope");
  DivisorClass c1;
  for (int i : subset) {
    if (i < 0 || i >= bundle.rank())
      throw std::invalid_argument("slope: summand index " + std::to_string(i) + " out of range");
    c1 += bundle.summands[static_cast<size_t>(i)];
  }
  std::vector<DivisorClass> classes{c1};
  classes.insert(classes.end(), static_cast<size_t>(n - 1), L);
  return intersect(*bundle.base, classes) / Rational(static_cast<long>(subset.size()));
}

PolarisedFibration make_projectivised_fibration(const SplitBundle& bundle,
                                               const DivisorClass& L_base, int H_xi,
                                               const DivisorClass& H_base) {
  if (!bundle.base) throw std::invalid_argument("fibration: bundle has no base");
  if (H_xi < 1) throw std::invalid_argument("fibration: the relative class must appear in H with positive coefficient");
  require_on_base(bundle.base, L_base, "fibration polarization");
  require_on_base(bundle.base, H_base, "fibration H");
  PolarisedFibration out;
  out.bundle = bundle;
  out.total = build_projective_bundle(bundle.base, bundle.summands);
  out.n = bundle.base->dimension();
  out.m = bundle.rank() - 1;
  out.L = L_base;
  out.H_xi = H_xi;
  out.H_base = H_base;
  out.H = DivisorClass(out.total->bundle()->name, Rational(H_xi)) + H_base;
  out.K = out.total->canonical();
  out.K_rel = out.total->relative_canonical();
  return out;
}

FibrationDegeneration make_weight_degeneration(const PolarisedFibration& fibration,
                                               const std::vector<long>& weights) {
  if (static_cast<int>(weights.size()) != fibration.bundle.rank())
    throw WrongArity("degeneration: " + std::to_string(weights.size()) + " weights for rank " +
                     std::to_string(fibration.bundle.rank()));
  FibrationDegeneration out;
  out.parent = fibration;
  const ModelPtr extended = extend_base_by_line(fibration.bundle.base);
  std::vector<DivisorClass> twisted;
  for (size_t i = 0; i < weights.size(); ++i)
    twisted.push_back(fibration.bundle.summands[i] +
                      DivisorClass(kLineName, Rational(weights[i])));
  const std::string xi = fibration.total->bundle()->name;
  out.total_model = build_projective_bundle(extended, twisted, xi);
  out.Hcal = DivisorClass(xi, Rational(fibration.H_xi)) + fibration.H_base;
  out.Lcal = fibration.L;
  out.central_slice = DivisorClass(kLineName, 1);
  out.K_rel_base_line = out.total_model->relative_canonical();
  out.K_rel_line = out.total_model->canonical() + DivisorClass(kLineName, 2);
  out.weights = weights;
  out.is_trivial = std::all_of(weights.begin(), weights.end(), [](long w) { return w == 0; });
  const bool constant =
      std::all_of(weights.begin(), weights.end(), [&](long w) { return w == weights[0]; });
  if (constant)
    out.Hpull = out.Hcal - DivisorClass(kLineName, Rational(fibration.H_xi) * weights[0]);
  check_family_classes(out);
  return out;
}

FibrationDegeneration make_subsheaf_degeneration(const PolarisedFibration& fibration,
                                                 const std::vector<int>& subsheaf) {
  std::set<int> chosen(subsheaf.begin(), subsheaf.end());
  if (chosen.empty()) throw TrivialSubsheaf("empty sub-direct-sum");
  if (static_cast<int>(chosen.size()) == fibration.bundle.rank())
    throw TrivialSubsheaf("sub-direct-sum equal to the whole bundle");
  for (int i : chosen)
    if (i < 0 || i >= fibration.bundle.rank())
      throw std::invalid_argument("sub-direct-sum: summand index " + std::to_string(i) +
                                  " out of range");
  std::vector<long> weights(static_cast<size_t>(fibration.bundle.rank()), 0);
  for (int i : chosen) weights[static_cast<size_t>(i)] = 1;
  FibrationDegeneration out = make_weight_degeneration(fibration, weights);
  out.subsheaf = std::vector<int>(chosen.begin(), chosen.end());
  return out;
}

FibrationDegeneration make_trivial_degeneration(const PolarisedFibration& fibration) {
  return make_weight_degeneration(
      fibration, std::vector<long>(static_cast<size_t>(fibration.bundle.rank()), 0));
}

std::vector<FibrationDegeneration> all_subsheaf_degenerations(
    const PolarisedFibration& fibration) {
  const int r = fibration.bundle.rank();
  if (r > 20) throw std::invalid_argument("sub-direct-sum enumeration capped at rank 20");
  std::vector<FibrationDegeneration> out;
  for (unsigned mask = 1; r > 1 && mask + 1 < (1u << r); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) subset.push_back(i);
    out.push_back(make_subsheaf_degeneration(fibration, subset));
  }
  return out;
}

TestConfiguration make_fibre_test_configuration(const FibrationDegeneration& degeneration) {
  if (degeneration.weights.empty())
    throw NotBundleType("fibre configuration needs per-summand weights");
  const ModelPtr line = build_projective_product({1}, {kLineName});
  std::vector<DivisorClass> summands;
  for (long w : degeneration.weights) summands.push_back(DivisorClass(kLineName, Rational(w)));
  TestConfiguration out;
  out.model = build_projective_bundle(line, summands, "xi");
  out.polarization = DivisorClass("xi", Rational(degeneration.parent.H_xi));
  out.K_rel_line = out.model->relative_canonical();
  out.fibre_slice = DivisorClass(kLineName, 1);
  out.weights = degeneration.weights;
  const auto& w = degeneration.weights;
  if (std::all_of(w.begin(), w.end(), [&](long x) { return x == w[0]; }))
    out.original_pullback =
        out.polarization - DivisorClass(kLineName, Rational(degeneration.parent.H_xi) * w[0]);
  return out;
}

namespace {

// Blowup of (line)x(line) at the intersection of the two rulings.
ModelPtr blown_up_quadric(const std::string& fibre_gen) {
  const ModelPtr ambient = build_projective_product({1, 1}, {fibre_gen, kLineName});
  BlowupCentre centre;
  centre.cuts = {DivisorClass(fibre_gen, 1), DivisorClass(kLineName, 1)};
  centre.centre_model = build_projective_product({0}, {"pt"});
  centre.restriction[fibre_gen] = DivisorClass::zero();
  centre.restriction[kLineName] = DivisorClass::zero();
  return build_blowup(ambient, centre, "e");
}

}  // namespace

TestConfiguration make_point_normal_cone_tc(int degree) {
  if (degree < 1) throw std::invalid_argument("normal-cone configuration needs a positive degree");
  TestConfiguration out;
  out.model = blown_up_quadric("h");
  out.polarization = DivisorClass("h", Rational(degree)) - DivisorClass("e", 1);
  out.K_rel_line = out.model->canonical() + DivisorClass(kLineName, 2);
  out.fibre_slice = DivisorClass(kLineName, 1);
  out.original_pullback = DivisorClass("h", Rational(degree));
  return out;
}

TestConfiguration make_resolved_product_tc() {
  TestConfiguration out;
  out.model = blown_up_quadric("h");
  out.polarization =
      DivisorClass("h", 1) + DivisorClass(kLineName, 1) - DivisorClass("e", 1);
  out.K_rel_line = out.model->canonical() + DivisorClass(kLineName, 2);
  out.fibre_slice = DivisorClass(kLineName, 1);
  out.original_pullback = DivisorClass("h", 1);
  out.weights = std::vector<long>{1, 0};
  return out;
}

ResolvedDegenerationModel resolve_rank2_degeneration(const FibrationDegeneration& degeneration) {
  const PolarisedFibration& fib = degeneration.parent;
  if (fib.bundle.rank() != 2)
    throw NotBundleType("blowup resolution implemented for rank-two bundles");
  const auto& w = degeneration.weights;
  const bool zero_one = (w == std::vector<long>{1, 0}) || (w == std::vector<long>{0, 1});
  if (!zero_one)
    throw UnsupportedCenter("blowup resolution needs zero/one weights with a single one");
  const size_t scaled = (w[0] == 1) ? 0 : 1;
  const size_t kept = 1 - scaled;

  const ModelPtr extended = extend_base_by_line(fib.bundle.base);
  std::vector<DivisorClass> untwisted = fib.bundle.summands;
  const std::string xi = fib.total->bundle()->name;
  const ModelPtr ambient = build_projective_bundle(extended, untwisted, xi);

  BlowupCentre centre;
  centre.cuts = {DivisorClass(xi, 1) - fib.bundle.summands[scaled], DivisorClass(kLineName, 1)};
  centre.centre_model = fib.bundle.base;
  for (const auto& f : fib.bundle.base->factors())
    centre.restriction[f.name] = DivisorClass(f.name, 1);
  centre.restriction[kLineName] = DivisorClass::zero();
  centre.restriction[xi] = fib.bundle.summands[kept];

  ResolvedDegenerationModel out;
  out.model = build_blowup(ambient, centre, "e");
  const DivisorClass graph_hyperplane =
      DivisorClass(xi, 1) + DivisorClass(kLineName, 1) - DivisorClass("e", 1);
  out.Hcal = graph_hyperplane * Rational(fib.H_xi) + fib.H_base;
  out.Hpull = fib.H;
  out.Lcal = fib.L;
  out.K_rel_line = out.model->canonical() + DivisorClass(kLineName, 2);
  out.central_slice = DivisorClass(kLineName, 1);
  return out;
}

}  // namespace kfib
