#include "kfib/chow.hpp"

#include <algorithm>
#include <sstream>

namespace kfib {

DivisorClass::DivisorClass(const std::string& generator, Rational coeff) {
  if (coeff != 0) c_.emplace(generator, std::move(coeff));
}

Rational DivisorClass::coefficient(const std::string& generator) const {
  auto it = c_.find(generator);
  return it == c_.end() ? Rational(0) : it->second;
}

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
  DivisorClass out = *this;
  for (const auto& [g, v] : o.c_) {
    auto [it, inserted] = out.c_.try_emplace(g, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) out.c_.erase(it);
    }
  }
  return out;
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const { return *this + (-o); }

DivisorClass DivisorClass::operator-() const {
  DivisorClass out = *this;
  for (auto& [g, v] : out.c_) v = -v;
  return out;
}

DivisorClass DivisorClass::operator*(const Rational& s) const {
  if (s == 0) return {};
  DivisorClass out = *this;
  for (auto& [g, v] : out.c_) v *= s;
  return out;
}

std::string DivisorClass::str() const {
  if (c_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [g, v] : c_) {
    if (!first) out << (v > 0 ? " + " : " - ");
    else if (v < 0) out << "-";
    first = false;
    const Rational a = v > 0 ? v : Rational(-v);
    if (a != 1) out << a.str() << "*";
    out << g;
  }
  return out.str();
}

Rational IntersectionProfile::number(const std::vector<int>& exponents) const {
  auto it = numbers.find(exponents);
  if (it == numbers.end())
    throw std::invalid_argument("intersection profile: no entry for the requested multidegree");
  return it->second;
}

std::vector<std::string> ChowModel::generator_names() const {
  std::vector<std::string> out;
  for (const auto& f : factors_) out.push_back(f.name);
  if (bundle_) out.push_back(bundle_->name);
  if (blowup_) out.push_back(blowup_->name);
  return out;
}

bool ChowModel::has_generator(const std::string& name) const {
  for (const auto& f : factors_)
    if (f.name == name) return true;
  if (bundle_ && bundle_->name == name) return true;
  if (blowup_ && blowup_->name == name) return true;
  return false;
}

DivisorClass ChowModel::generator(const std::string& name) const {
  if (!has_generator(name))
    throw std::invalid_argument("model has no generator named '" + name + "'");
  return DivisorClass(name, 1);
}

namespace {

void require_known_generators(const ChowModel& model, const DivisorClass& cls,
                              const std::string& context) {
  for (const auto& [g, v] : cls.terms())
    if (!model.has_generator(g))
      throw std::invalid_argument(context + ": unknown generator '" + g + "'");
}

// Dense exponent vectors over a model's generator ordering
// (factors..., bundle class, exceptional class), mapped to coefficients.
using Exponents = std::vector<int>;
using Expansion = std::map<Exponents, Rational>;

struct Evaluator {
  const ChowModel& model;
  std::vector<std::string> names;
  std::vector<int> bound;  // nilpotency bound per position; -1 = none
  std::map<std::string, size_t> position;
  int xi_pos = -1;
  int e_pos = -1;

  explicit Evaluator(const ChowModel& m) : model(m) {
    for (const auto& f : m.factors()) {
      position[f.name] = names.size();
      names.push_back(f.name);
      bound.push_back(f.dim);
    }
    if (m.bundle()) {
      xi_pos = static_cast<int>(names.size());
      position[m.bundle()->name] = names.size();
      names.push_back(m.bundle()->name);
      bound.push_back(-1);
    }
    if (m.blowup()) {
      e_pos = static_cast<int>(names.size());
      position[m.blowup()->name] = names.size();
      names.push_back(m.blowup()->name);
      bound.push_back(-1);
    }
  }

  Expansion unit() const { return {{Exponents(names.size(), 0), Rational(1)}}; }

  Expansion multiply(const Expansion& in, const DivisorClass& cls) const {
    Expansion out;
    for (const auto& [g, coeff] : cls.terms()) {
      auto it = position.find(g);
      if (it == position.end())
        throw std::invalid_argument("class references unknown generator '" + g + "'");
      const size_t p = it->second;
      for (const auto& [exps, v] : in) {
        if (bound[p] >= 0 && exps[p] + 1 > bound[p]) continue;  // nilpotent
        Exponents next = exps;
        ++next[p];
        auto [slot, inserted] = out.try_emplace(next, v * coeff);
        if (!inserted) {
          slot->second += v * coeff;
          if (slot->second == 0) out.erase(slot);
        }
      }
    }
    return out;
  }

  // Multiply by the complete homogeneous symmetric polynomial of the given
  // degree in the given classes (sum over size-`degree` multisets of their
  // products).
  Expansion multiply_complete_homogeneous(const Expansion& in,
                                          const std::vector<DivisorClass>& classes,
                                          int degree) const {
    Expansion acc;
    multiset_products(in, classes, degree, 0, acc);
    return acc;
  }

  void multiset_products(const Expansion& cur, const std::vector<DivisorClass>& classes,
                         int remaining, size_t start, Expansion& acc) const {
    if (remaining == 0) {
      for (const auto& [exps, v] : cur) {
        auto [slot, inserted] = acc.try_emplace(exps, v);
        if (!inserted) {
          slot->second += v;
          if (slot->second == 0) acc.erase(slot);
        }
      }
      return;
    }
    for (size_t i = start; i < classes.size(); ++i)
      multiset_products(multiply(cur, classes[i]), classes, remaining - 1, i, acc);
  }

  Rational evaluate(const Expansion& in) const {
    Rational total = 0;
    for (const auto& [exps, v] : in) total += v * evaluate_monomial(exps);
    return total;
  }

  Rational evaluate_monomial(const Exponents& exps) const {
    if (e_pos >= 0 && exps[static_cast<size_t>(e_pos)] > 0) return blowup_monomial(exps);
    if (xi_pos >= 0 && exps[static_cast<size_t>(xi_pos)] > 0) return bundle_monomial(exps);
    return factor_monomial(exps);
  }

  // Pure product monomial: the point class and nothing else has degree 1.
  Rational factor_monomial(const Exponents& exps) const {
    for (size_t p = 0; p < names.size(); ++p) {
      if (bound[p] >= 0) {
        if (exps[p] != bound[p]) return Rational(0);
      } else if (exps[p] != 0) {
        return Rational(0);
      }
    }
    return Rational(1);
  }

  // Replace xi^{r-1+s} by h_s(summand classes) and evaluate on the factors.
  Rational bundle_monomial(const Exponents& exps) const {
    const auto& b = *model.bundle();
    const int r = static_cast<int>(b.summands.size());
    const int p = exps[static_cast<size_t>(xi_pos)];
    if (p < r - 1) return Rational(0);
    Exponents rest = exps;
    rest[static_cast<size_t>(xi_pos)] = 0;
    Expansion cur = {{rest, Rational(1)}};
    cur = multiply_complete_homogeneous(cur, b.summands, p - (r - 1));
    Rational total = 0;
    for (const auto& [m, v] : cur) total += v * factor_monomial(m);
    return total;
  }

  // Push the monomial down to the centre:
  //   deg(pullback(b)·e^q) = (-1)^{r+1} deg_Z(b|_Z · h_{q-r}(cut restrictions)).
  Rational blowup_monomial(const Exponents& exps) const {
    const auto& bl = *model.blowup();
    const int r = static_cast<int>(bl.centre.cuts.size());
    const int q = exps[static_cast<size_t>(e_pos)];
    if (q < r) return Rational(0);
    Evaluator down(*bl.centre.centre_model);
    Expansion cur = down.unit();
    for (size_t p = 0; p < names.size(); ++p) {
      if (static_cast<int>(p) == e_pos) continue;
      const DivisorClass& restricted = bl.centre.restriction.at(names[p]);
      for (int i = 0; i < exps[p]; ++i) cur = down.multiply(cur, restricted);
    }
    std::vector<DivisorClass> restricted_cuts;
    for (const auto& cut : bl.centre.cuts) {
      DivisorClass image;
      for (const auto& [g, v] : cut.terms()) image += bl.centre.restriction.at(g) * v;
      restricted_cuts.push_back(image);
    }
    cur = down.multiply_complete_homogeneous(cur, restricted_cuts, q - r);
    const Rational value = down.evaluate(cur);
    return (r % 2 == 1) ? value : -value;
  }
};

}  // namespace

ModelPtr build_projective_product(const std::vector<int>& dims,
                                  const std::vector<std::string>& names) {
  if (dims.empty())
    throw std::invalid_argument("projective product needs at least one factor");
  if (!names.empty() && names.size() != dims.size())
    throw std::invalid_argument("projective product: one name per factor required");
  auto model = std::shared_ptr<ChowModel>(new ChowModel());
  DivisorClass canonical;
  for (size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 0)
      throw std::invalid_argument("projective product: factor dimension must be nonnegative");
    ChowModel::Factor f;
    f.name = names.empty() ? "h" + std::to_string(i + 1) : names[i];
    f.dim = dims[i];
    for (const auto& existing : model->factors_)
      if (existing.name == f.name)
        throw std::invalid_argument("projective product: duplicate generator name '" + f.name + "'");
    model->dimension_ += f.dim;
    canonical += DivisorClass(f.name, Rational(-(f.dim + 1)));
    model->factors_.push_back(std::move(f));
  }
  model->canonical_ = canonical;
  return model;
}

ModelPtr build_projective_bundle(const ModelPtr& base,
                                 const std::vector<DivisorClass>& summands,
                                 const std::string& name) {
  if (!base) throw std::invalid_argument("projective bundle: null base");
  if (summands.empty()) throw EmptyBundle("projective bundle with no summands");
  if (base->bundle() || base->blowup())
    throw std::invalid_argument("projective bundle: base must be a product of projective spaces");
  if (base->has_generator(name))
    throw std::invalid_argument("projective bundle: generator name '" + name + "' already in use");
  for (const auto& s : summands) require_known_generators(*base, s, "projective bundle summand");
  auto model = std::shared_ptr<ChowModel>(new ChowModel());
  model->factors_ = base->factors();
  model->dimension_ = base->dimension() + static_cast<int>(summands.size()) - 1;
  ChowModel::Bundle b;
  b.name = name;
  b.summands = summands;
  b.base = base;
  model->bundle_ = std::move(b);
  DivisorClass c1;
  for (const auto& s : summands) c1 += s;
  const Rational rank(static_cast<long>(summands.size()));
  model->relative_canonical_ = DivisorClass(name, -rank) + c1;
  model->canonical_ = model->relative_canonical_ + base->canonical();
  return model;
}

ModelPtr build_blowup(const ModelPtr& ambient, const BlowupCentre& centre,
                      const std::string& name) {
  if (!ambient) throw std::invalid_argument("blowup: null ambient");
  if (ambient->blowup()) throw UnsupportedCenter("iterated blowups are not supported");
  if (centre.cuts.empty()) throw UnsupportedCenter("blowup centre needs at least one cut");
  if (!centre.centre_model) throw UnsupportedCenter("blowup centre needs a model");
  const int codim = static_cast<int>(centre.cuts.size());
  if (centre.centre_model->dimension() != ambient->dimension() - codim)
    throw UnsupportedCenter("blowup centre dimension does not match the cut count");
  if (ambient->has_generator(name) || centre.centre_model->has_generator(name))
    throw std::invalid_argument("blowup: generator name '" + name + "' already in use");
  for (const auto& cut : centre.cuts) require_known_generators(*ambient, cut, "blowup cut");
  for (const auto& g : ambient->generator_names()) {
    auto it = centre.restriction.find(g);
    if (it == centre.restriction.end())
      throw UnsupportedCenter("blowup centre: no restriction given for generator '" + g + "'");
    require_known_generators(*centre.centre_model, it->second, "blowup restriction");
  }
  auto model = std::shared_ptr<ChowModel>(new ChowModel());
  model->factors_ = ambient->factors();
  model->bundle_ = ambient->bundle();
  model->dimension_ = ambient->dimension();
  ChowModel::Blowup bl;
  bl.name = name;
  bl.centre = centre;
  bl.ambient = ambient;
  model->blowup_ = std::move(bl);
  model->canonical_ = ambient->canonical() + DivisorClass(name, Rational(codim - 1));
  model->relative_canonical_ =
      ambient->relative_canonical() + DivisorClass(name, Rational(codim - 1));
  return model;
}

Rational intersect(const ChowModel& model, const std::vector<DivisorClass>& classes) {
  if (static_cast<int>(classes.size()) != model.dimension())
    throw WrongArity("intersect: " + std::to_string(classes.size()) + " classes on a " +
                     std::to_string(model.dimension()) + "-dimensional model");
  Evaluator ev(model);
  Expansion cur = ev.unit();
  for (const auto& cls : classes) {
    require_known_generators(model, cls, "intersect");
    cur = ev.multiply(cur, cls);
    if (cur.empty()) return Rational(0);
  }
  return ev.evaluate(cur);
}

Rational intersect_powers(const ChowModel& model,
                          const std::vector<std::pair<DivisorClass, int>>& powers) {
  std::vector<DivisorClass> classes;
  for (const auto& [cls, mult] : powers) {
    if (mult < 0) throw std::invalid_argument("intersect: negative multiplicity");
    for (int i = 0; i < mult; ++i) classes.push_back(cls);
  }
  return intersect(model, classes);
}

namespace {

void enumerate_multidegrees(int slots, int total, std::vector<int>& cur,
                            std::vector<std::vector<int>>& out) {
  if (slots == 1) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int i = 0; i <= total; ++i) {
    cur.push_back(i);
    enumerate_multidegrees(slots - 1, total - i, cur, out);
    cur.pop_back();
  }
}

}  // namespace

IntersectionProfile to_profile(const ChowModel& model) {
  IntersectionProfile profile;
  profile.dimension = model.dimension();
  profile.generators = model.generator_names();
  std::vector<std::vector<int>> degrees;
  std::vector<int> cur;
  enumerate_multidegrees(static_cast<int>(profile.generators.size()), profile.dimension, cur,
                         degrees);
  for (const auto& d : degrees) {
    std::vector<DivisorClass> classes;
    for (size_t i = 0; i < d.size(); ++i)
      for (int c = 0; c < d[i]; ++c) classes.push_back(DivisorClass(profile.generators[i], 1));
    profile.numbers.emplace(d, intersect(model, classes));
  }
  return profile;
}

}  // namespace kfib
