#include "maxlip/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "maxlip/error.hpp"
#include "maxlip/grid_io.hpp"
#include "maxlip/lipschitz.hpp"
#include "maxlip/lux_norm.hpp"
#include "maxlip/maximal.hpp"
#include "maxlip/prefix_sum.hpp"

namespace maxlip {

namespace {

using Checks = std::vector<Check>;

// Tracks the entry with the largest violation margin of lhs `rel` rhs.
struct Worst {
  explicit Worst(Relation r) : rel(r) {}

  Relation rel;
  double lhs = NAN;
  double rhs = NAN;
  double margin = -INFINITY;
  std::string witness;

  bool empty() const { return margin == -INFINITY; }

  double margin_of(double l, double r) const {
    const double m = rel == Relation::LessEq ? l - r : rel == Relation::GreaterEq ? r - l : std::abs(l - r);
    return std::isnan(m) ? INFINITY : m;
  }

  template <class Describe>
  void offer(double l, double r, Describe&& describe) {
    const double m = margin_of(l, r);
    if (m > margin) {
      margin = m;
      lhs = l;
      rhs = r;
      witness = describe();
    }
  }

  // Cellwise: lhs[i] rel rhs[i]; describe(i) names the entry.
  template <class Describe>
  void offer_cells(const Eigen::ArrayXd& l, const Eigen::ArrayXd& r, Describe&& describe) {
    Eigen::Index best = -1;
    double best_margin = -INFINITY;
    for (Eigen::Index i = 0; i < l.size(); ++i) {
      const double m = margin_of(l[i], r[i]);
      if (m > best_margin) best_margin = m, best = i;
    }
    if (best >= 0) offer(l[best], r[best], [&] { return describe(best); });
  }
};

void add(Checks& out, const std::string& id, const std::string& anchor, const Worst& w, double tol) {
  if (w.empty()) return;
  out.push_back(verdict(id, anchor, w.lhs, w.rel, w.rhs, tol, w.witness));
}

struct Ctx {
  const ScenarioConfig& cfg;
  Resolved r;
  double beta;
  double dfac;  // dim^{beta/2}
  Tolerances tol;
  LipSampling sampling;

  const Grid& grid() const { return r.grid; }
  CubeFamily family() const { return r.family; }
  int dim() const { return r.grid.dim(); }
};

std::string tag(const std::string& label) { return "[" + label + "]"; }

std::string cell_in_box(const Grid& g, const Box& box, Eigen::Index local) {
  const int w = box.hi[1] - box.lo[1];
  const Cell c = g.dim() == 1 ? Cell{box.lo[0] + int(local), 0}
                              : Cell{box.lo[0] + int(local / w), box.lo[1] + int(local % w)};
  return "cell" + to_string(c, g.dim());
}

std::string cell_name(const Grid& g, Eigen::Index k) { return "cell" + to_string(g.cell(k), g.dim()); }

GridFunction times_indicator(const GridFunction& b, const Cube& q) {
  return b.with_values(b.values() * indicator(b.grid(), q).values());
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : (num == 0.0 ? 0.0 : INFINITY); }

bool nonnegative(const GridFunction& b) { return b.values().minCoeff() >= 0.0; }

LipResult lip(const Ctx& c, const GridFunction& b) { return lip_seminorm(b, c.beta, c.sampling); }

// ---------------------------------------------------------------- lemmas

void lemmas(const Ctx& c, Checks& out) {
  const Grid& g = c.grid();
  const auto cubes = enumerate_cubes(g, c.family());
  const auto& fs = c.r.functions;

  for (const auto& [qname, q] : c.r.exponents) {
    Worst holder(Relation::GreaterEq);
    for (const auto& [fa, a] : fs)
      for (const auto& [fb, b] : fs)
        holder.offer(holder_defect(a, b, q), 0.0, [&] { return "f=" + fa + ", g=" + fb; });
    add(out, "lemmas.holder" + tag(qname), "int|fg| <= r_p ||f||_p ||g||_p', r_p = 1 + 1/p_- - 1/p_+", holder,
        c.tol.identity);

    for (double s : {0.5, 1.0, 1.5, 2.0}) {
      if (s * q.minus() < 1.0) continue;
      Worst w(Relation::LessEq);
      for (const auto& [fname, f] : fs) w.offer(check_s_norm(f, q, s), 0.0, [&] { return "f=" + fname; });
      add(out, "lemmas.s_norm" + tag(qname + ",s=" + format_number(s)), "|| |f|^s ||_p = ||f||_{sp}^s", w,
          c.tol.identity);
    }

    for (double r : {2.0, 3.0}) {
      const auto rq = scaled(q, r);
      Worst w(Relation::Equal);
      for (const auto& cube : cubes)
        w.offer(indicator_norm(cube, rq), std::pow(indicator_norm(cube, q), 1.0 / r),
                [&] { return to_string(cube, g.dim()); });
      add(out, "lemmas.indicator_power" + tag(qname + ",r=" + format_number(r)),
          "||chi_Q||_{rq} = ||chi_Q||_q^{1/r}", w, c.tol.identity);
    }

    if (q.is_constant()) {
      Worst w(Relation::Equal);
      for (const auto& cube : cubes)
        w.offer(cube_duality_product(cube, q), 1.0, [&] { return to_string(cube, g.dim()); });
      add(out, "lemmas.duality" + tag(qname), "|Q|^-1 ||chi_Q||_q ||chi_Q||_q' = 1 for constant q", w,
          c.tol.identity);
    } else {
      Worst low(Relation::GreaterEq);
      Worst high(Relation::LessEq);
      for (const auto& cube : cubes) {
        const double v = cube_duality_product(cube, q);
        low.offer(v, 1.0 / holder_constant(q), [&] { return to_string(cube, g.dim()); });
        high.offer(v, 1.0, [&] { return to_string(cube, g.dim()); });
      }
      add(out, "lemmas.duality_lower" + tag(qname), "|Q|^-1 ||chi_Q||_q ||chi_Q||_q' >= 1/r_q", low,
          c.tol.identity);
      out.push_back(monitored("lemmas.duality_max" + tag(qname), "|Q|^-1 ||chi_Q||_q ||chi_Q||_q' <= C", high.lhs,
                              Relation::LessEq, 1.0, 0.0, high.witness));
    }

    const double lh = q.log_holder();
    out.push_back(monitored("lemmas.log_holder" + tag(qname),
                            "max |p(x)-p(y)| log(e + 1/|x-y|) (M bounded on L^p surrogate)", lh, Relation::LessEq,
                            c.cfg.log_holder_threshold.value_or(lh), 0.0,
                            q.log_holder_exact() ? "all pairs" : "sampled pairs"));
  }

  for (const auto& [pname, pair] : c.r.pairs) {
    if (pair.p.is_constant()) {
      Worst w(Relation::Equal);
      for (const auto& cube : cubes)
        w.offer(cube_embedding_ratio(cube, pair), 1.0, [&] { return to_string(cube, g.dim()); });
      add(out, "lemmas.embedding" + tag(pname), "||chi_Q||_p = |Q|^{beta/n} ||chi_Q||_q for constant pairs", w,
          c.tol.identity);
    } else {
      Worst w(Relation::LessEq);
      for (const auto& cube : cubes)
        w.offer(cube_embedding_ratio(cube, pair), 1.0, [&] { return to_string(cube, g.dim()); });
      out.push_back(monitored("lemmas.embedding_max" + tag(pname), "||chi_Q||_p <= C |Q|^{beta/n} ||chi_Q||_q",
                              w.lhs, Relation::LessEq, 1.0, 0.0, w.witness));
    }
  }

  for (const auto& [bname, b] : c.r.symbols) {
    const double o1 = osc_norm_q(b, c.beta, 1.0, c.family()).value;
    const auto o2 = osc_norm_q(b, c.beta, 2.0, c.family());
    out.push_back(verdict("lemmas.osc_jensen" + tag(bname), "osc_1(b) <= osc_2(b) (power means)", o1,
                          Relation::LessEq, o2.value, c.tol.identity, to_string(o2.witness, g.dim())));
    const auto l = lip(c, b);
    const auto make = l.exact ? verdict : monitored;
    out.push_back(make("lemmas.osc_lip" + tag(bname), "osc_1(b) <= n^{beta/2} ||b||_Lip_beta", o1, Relation::LessEq,
                       c.dfac * l.value, c.tol.identity, to_string(l.witness, g.dim())));
    out.push_back(monitored("lemmas.osc_ratio" + tag(bname), "osc_1(b) / ||b||_Lip_beta (equivalent norms)",
                            safe_ratio(o1, l.value), Relation::LessEq, c.dfac, 0.0, ""));
  }

  for (const auto& [pname, pair] : c.r.pairs) {
    std::vector<GridFunction> bank;
    for (const auto& [fname, f] : fs)
      if (!(f.values() == 0.0).all()) bank.push_back(f);
    const auto v = opnorm_lower(op::Fractional{c.beta}, pair.p, pair.q, bank, c.family());
    out.push_back(monitored("lemmas.frac_bounded" + tag(pname), "||M_beta f||_q / ||f||_p (lower bound)", v.value,
                            Relation::GreaterEq, 0.0, 0.0, to_string(v.witness, g.dim())));
  }
}

// ------------------------------------------------------------ identities

void identities(const Ctx& c, Checks& out) {
  const Grid& g = c.grid();
  const int n = g.cells();
  const int d = g.dim();
  const auto mode = c.family();
  const auto cubes = enumerate_cubes(g, mode);

  {
    // Oracle equivalence on a grid small enough for the nested loops.
    const int small = std::min(n, d == 1 ? 32 : 8);
    const Resolved o = resolve(c.cfg, small);
    const std::string where = "N=" + std::to_string(small);
    const std::size_t pairs = std::max(o.symbols.size(), o.functions.size());
    const Cube local{{small / 4, d == 2 ? small / 4 : 0}, std::max(1, small / 2)};
    struct OpEntry {
      const char* id;
      std::function<OperatorTag(const GridFunction&)> make;
    };
    const std::vector<OpEntry> ops{
        {"hl", [](const GridFunction&) -> OperatorTag { return op::HardyLittlewood{}; }},
        {"sharp", [](const GridFunction&) -> OperatorTag { return op::Sharp{}; }},
        {"frac", [&](const GridFunction&) -> OperatorTag { return op::Fractional{c.beta}; }},
        {"local", [&](const GridFunction&) -> OperatorTag { return op::Local{local}; }},
        {"max_commutator", [](const GridFunction& b) -> OperatorTag { return op::MaxCommutator{b}; }},
        {"commutator_hl", [](const GridFunction& b) -> OperatorTag { return op::CommutatorHL{b}; }},
        {"commutator_sharp", [](const GridFunction& b) -> OperatorTag { return op::CommutatorSharp{b}; }},
    };
    if (!o.symbols.empty() && !o.functions.empty()) {
      for (const auto& opn : ops) {
        Worst w(Relation::LessEq);
        for (std::size_t i = 0; i < pairs; ++i) {
          const auto& b = o.symbols[i % o.symbols.size()];
          const auto& f = o.functions[i % o.functions.size()];
          w.offer(oracle_check(opn.make(b.value), f.value), 0.0,
                  [&] { return where + ", b=" + b.name + ", f=" + f.name; });
        }
        add(out, std::string("identities.oracle.") + opn.id, "fast path = nested-loop oracle (max abs deviation)", w,
            c.tol.oracle);
      }
    }
  }

  Worst hl_one(Relation::Equal), sharp_top(Relation::LessEq), sharp_half(Relation::Equal), frac_id(Relation::Equal);
  for (const auto& q : cubes) {
    const auto chi = indicator(g, q);
    const Box box = q.box(d);
    const auto at = [&](Eigen::Index i) { return to_string(q, d) + ", " + cell_in_box(g, box, i); };
    const Eigen::ArrayXd m = restrict_to(hl_max(chi, mode), q);
    hl_one.offer_cells(m, Eigen::ArrayXd::Ones(m.size()), at);
    const GridFunction sh = sharp_max(chi, mode);
    sharp_top.offer_cells(sh.values(), Eigen::ArrayXd::Constant(sh.size(), 0.5),
                          [&](Eigen::Index k) { return to_string(q, d) + ", " + cell_name(g, k); });
    if (d == 1 && 2 * q.side <= n) {
      const Eigen::ArrayXd s = restrict_to(sh, q);
      sharp_half.offer_cells(s, Eigen::ArrayXd::Constant(s.size(), 0.5), at);
    }
    const Eigen::ArrayXd fr = restrict_to(frac_max(chi, c.beta, mode), q);
    frac_id.offer_cells(fr, Eigen::ArrayXd::Constant(fr.size(), std::pow(measure(g, q), c.beta / d)), at);
  }
  add(out, "identities.hl_indicator", "M(chi_Q)(x) = chi_Q(x) on Q", hl_one, c.tol.oracle);
  add(out, "identities.sharp_indicator_bound", "M#(chi_Q) <= 1/2 everywhere", sharp_top, c.tol.oracle);
  add(out, "identities.sharp_indicator_half", "M#(chi_Q)(x) = 1/2 on Q when 2k <= N", sharp_half, c.tol.oracle);
  add(out, "identities.frac_indicator", "M_beta(chi_Q) = |Q|^{beta/n} on Q", frac_id, c.tol.oracle);

  for (const auto& [fa, a] : c.r.functions) {
    Worst lower(Relation::GreaterEq), sharp_pos(Relation::GreaterEq), sub(Relation::LessEq);
    const auto ma = hl_max(a, mode);
    lower.offer_cells(ma.values(), a.values().abs(), [&](Eigen::Index k) { return "f=" + fa + ", " + cell_name(g, k); });
    sharp_pos.offer_cells(sharp_max(a, mode).values(), Eigen::ArrayXd::Zero(g.size()),
                          [&](Eigen::Index k) { return "f=" + fa + ", " + cell_name(g, k); });
    for (const auto& [fb, b] : c.r.functions) {
      const auto msum = hl_max(a.with_values(a.values() + b.values()), mode);
      sub.offer_cells(msum.values(), ma.values() + hl_max(b, mode).values(),
                      [&](Eigen::Index k) { return "f=" + fa + ", g=" + fb + ", " + cell_name(g, k); });
    }
    add(out, "identities.hl_lower" + tag(fa), "M(f) >= |f|", lower, c.tol.oracle);
    add(out, "identities.sharp_nonneg" + tag(fa), "M#(f) >= 0", sharp_pos, 0.0);
    add(out, "identities.hl_sublinear" + tag(fa), "M(f+g) <= M(f) + M(g)", sub, c.tol.oracle);
  }

  for (const auto& [bname, b] : c.r.symbols) {
    const PrefixSums sums(b);
    const PrefixSums abs_sums(g, b.values().abs());
    Worst local_id(Relation::Equal), median(Relation::Equal), factor2(Relation::LessEq), neg(Relation::LessEq);
    for (const auto& q : cubes) {
      const Box box = q.box(d);
      const auto at = [&](Eigen::Index i) { return to_string(q, d) + ", " + cell_in_box(g, box, i); };
      const auto cube_only = [&] { return to_string(q, d); };
      const Eigen::ArrayXd bq = restrict_to(b, q);
      const Eigen::ArrayXd lm = local_max(abs_sums, q).values();
      // Cubes escaping Q are searched too, so the full family is used here.
      local_id.offer_cells(restrict_to(hl_max(times_indicator(b, q), CubeFamily::Full), q), lm, at);

      const double mean = sums.average(q);
      const double h = g.cell_measure();
      const double m = measure(g, q);
      double below = 0.0, above = 0.0;
      for (Eigen::Index i = 0; i < bq.size(); ++i) (bq[i] <= mean ? below : above) += std::abs(bq[i] - mean) * h;
      median.offer(below, above, cube_only);

      const double scale = std::pow(m, 1.0 + c.beta / d);
      factor2.offer((bq - mean).abs().sum() * h / scale, 2.0 * (bq - lm).abs().sum() * h / scale, cube_only);
      neg.offer((-bq).max(0.0).sum() * h / m, (lm - bq).abs().sum() * h / m, cube_only);
    }
    add(out, "identities.local_max" + tag(bname), "M(b chi_Q)(x) = M_Q(b)(x) on Q", local_id, c.tol.oracle);
    add(out, "identities.median_split" + tag(bname), "int_E |b-b_Q| = int_{Q\\E} |b-b_Q|, E = {b <= b_Q}", median,
        c.tol.identity);
    add(out, "identities.factor2" + tag(bname),
        "|Q|^{-1-beta/n} int_Q |b-b_Q| <= 2 |Q|^{-1-beta/n} int_Q |b-M_Q(b)|", factor2, c.tol.identity);
    add(out, "identities.negative_part" + tag(bname), "|Q|^-1 int_Q b^- <= |Q|^-1 int_Q |M_Q(b)-b|", neg,
        c.tol.identity);
  }
}

// ------------------------------------------------------- theorem chains

// Pointwise domination of an operator output by n^{beta/2} L M_beta f.
void lip_domination(const Ctx& c, Checks& out, const std::string& id, const std::string& anchor,
                    const std::string& bname, const GridFunction& b, double factor,
                    const std::function<Eigen::ArrayXd(const GridFunction&)>& lhs_of) {
  const Grid& g = c.grid();
  const auto l = lip(c, b);
  Worst w(Relation::LessEq);
  for (const auto& [fname, f] : c.r.functions) {
    const Eigen::ArrayXd bound = factor * c.dfac * l.value * frac_max(f, c.beta, c.family()).values();
    w.offer_cells(lhs_of(f), bound, [&](Eigen::Index k) { return "f=" + fname + ", " + cell_name(g, k); });
  }
  if (w.empty()) return;
  auto check = (l.exact ? verdict : monitored)(id + tag(bname), anchor, w.lhs, w.rel, w.rhs, c.tol.identity, w.witness);
  out.push_back(check);
}

std::vector<GridFunction> nonzero_bank(const Ctx& c) {
  std::vector<GridFunction> bank;
  for (const auto& [fname, f] : c.r.functions)
    if (!(f.values() == 0.0).all()) bank.push_back(f);
  return bank;
}

void operator_ratios(const Ctx& c, Checks& out, const std::string& id, const std::string& anchor,
                     const std::string& bname, const OperatorTag& tag_op) {
  const auto bank = nonzero_bank(c);
  if (bank.empty()) return;
  for (const auto& [pname, pair] : c.r.pairs) {
    const auto v = opnorm_lower(tag_op, pair.p, pair.q, bank, c.family());
    out.push_back(monitored(id + tag(bname + "," + pname), anchor, v.value, Relation::GreaterEq, 0.0, 0.0,
                            to_string(v.witness, c.dim())));
  }
}

void theorem1(const Ctx& c, Checks& out) {
  const Grid& g = c.grid();
  const int d = g.dim();
  const auto mode = c.family();
  const auto cubes = enumerate_cubes(g, mode);
  for (const auto& [bname, b] : c.r.symbols) {
    const PrefixSums sums(b);
    const auto l = lip(c, b);
    Worst pointwise(Relation::LessEq);
    std::vector<Worst> norm_chain(c.r.exponents.size(), Worst(Relation::LessEq));
    std::vector<Worst> recover(c.r.exponents.size(), Worst(Relation::LessEq));
    std::vector<LipResult> lv;
    for (const auto& [qname, q] : c.r.exponents) lv.push_back(lambda_var(b, c.beta, q, mode));

    for (const auto& q : cubes) {
      const Box box = q.box(d);
      const Eigen::ArrayXd dev = restrict_to(b, q) - sums.average(q);
      const GridFunction mb = max_commutator(b, indicator(g, q), mode);
      pointwise.offer_cells(dev.abs(), restrict_to(mb, q),
                            [&](Eigen::Index i) { return to_string(q, d) + ", " + cell_in_box(g, box, i); });
      const double osc = dev.abs().sum() * g.cell_measure() / std::pow(measure(g, q), 1.0 + c.beta / d);
      for (std::size_t e = 0; e < c.r.exponents.size(); ++e) {
        const auto& qe = c.r.exponents[e].value;
        norm_chain[e].offer(restricted_norm(dev, q, qe), lux_norm(mb, qe).value, [&] { return to_string(q, d); });
        recover[e].offer(osc, holder_constant(qe) * lv[e].value * cube_duality_product(q, qe),
                         [&] { return to_string(q, d); });
      }
    }
    add(out, "theorem1.pointwise" + tag(bname), "|(b(x)-b_Q) chi_Q(x)| <= M_b(chi_Q)(x)", pointwise, c.tol.identity);
    for (std::size_t e = 0; e < c.r.exponents.size(); ++e) {
      const std::string qn = c.r.exponents[e].name;
      add(out, "theorem1.norm_chain" + tag(bname + "," + qn), "||(b-b_Q) chi_Q||_q <= ||M_b(chi_Q)||_q",
          norm_chain[e], c.tol.identity);
      add(out, "theorem1.recover" + tag(bname + "," + qn),
          "|Q|^{-1-beta/n} int_Q |b-b_Q| <= r_q ||b||_{Lambda_beta,q} |Q|^-1 ||chi_Q||_q ||chi_Q||_q'", recover[e],
          c.tol.identity);
      out.push_back(monitored("theorem1.lambda_ratio" + tag(bname + "," + qn),
                              "||b||_{Lambda_beta,q} / ||b||_Lip_beta", safe_ratio(lv[e].value, l.value),
                              Relation::LessEq, c.dfac, 0.0, to_string(lv[e].witness, d)));
    }
    lip_domination(c, out, "theorem1.mb_domination", "M_b f(x) <= n^{beta/2} ||b||_Lip_beta M_beta f(x)", bname, b,
                   1.0, [&](const GridFunction& f) { return max_commutator(b, f, mode).values(); });
    operator_ratios(c, out, "theorem1.opnorm", "||M_b f||_q / ||f||_p (lower bound)", bname, op::MaxCommutator{b});
  }
}

void theorem2(const Ctx& c, Checks& out) {
  const Grid& g = c.grid();
  const int d = g.dim();
  const auto mode = c.family();
  const auto cubes = enumerate_cubes(g, mode);
  for (const auto& [bname, b] : c.r.symbols) {
    const bool pos = nonnegative(b);
    if (pos) {
      Worst w(Relation::LessEq);
      for (const auto& [fname, f] : c.r.functions)
        w.offer_cells(commutator_hl(b, f, mode).values().abs(), max_commutator(b, f, mode).values(),
                      [&](Eigen::Index k) { return "f=" + fname + ", " + cell_name(g, k); });
      add(out, "theorem2.mb_domination" + tag(bname), "|[b,M] f(x)| <= M_b f(x) for b >= 0", w, c.tol.identity);
      lip_domination(c, out, "theorem2.lip_domination",
                     "|[b,M] f(x)| <= n^{beta/2} ||b||_Lip_beta M_beta f(x) for b >= 0", bname, b, 1.0,
                     [&](const GridFunction& f) { return commutator_hl(b, f, mode).values().abs().eval(); });
    }

    const PrefixSums sums(b);
    const PrefixSums abs_sums(g, b.values().abs());
    const auto l = lip(c, b);
    for (const auto& [qname, q] : c.r.exponents) {
      const auto ls = lambda_star(b, c.beta, q, mode);
      Worst chain(Relation::LessEq), neg(Relation::LessEq);
      for (const auto& cube : cubes) {
        const Eigen::ArrayXd bq = restrict_to(b, cube);
        const Eigen::ArrayXd lm = local_max(abs_sums, cube).values();
        const double m = measure(g, cube);
        const double h = g.cell_measure();
        const double bound = holder_constant(q) * ls.value * cube_duality_product(cube, q);
        chain.offer((bq - lm).abs().sum() * h / std::pow(m, 1.0 + c.beta / d), bound,
                    [&] { return to_string(cube, d); });
        neg.offer((-bq).max(0.0).sum() * h / std::pow(m, 1.0 + c.beta / d), bound, [&] { return to_string(cube, d); });
      }
      add(out, "theorem2.star_chain" + tag(bname + "," + qname),
          "|Q|^{-1-beta/n} int_Q |b-M_Q(b)| <= r_q ||b||_{Lambda*_beta,q} |Q|^-1 ||chi_Q||_q ||chi_Q||_q'", chain,
          c.tol.identity);
      add(out, "theorem2.negative_chain" + tag(bname + "," + qname),
          "|Q|^{-1-beta/n} int_Q b^- <= r_q ||b||_{Lambda*_beta,q} |Q|^-1 ||chi_Q||_q ||chi_Q||_q'", neg,
          c.tol.identity);
      out.push_back(monitored("theorem2.lambda_ratio" + tag(bname + "," + qname),
                              pos ? "||b||_{Lambda*_beta,q} / ||b||_Lip_beta for b >= 0"
                                  : "||b||_{Lambda*_beta,q} / ||b||_Lip_beta (b has a negative part)",
                              safe_ratio(ls.value, l.value), Relation::GreaterEq, 0.0, 0.0, to_string(ls.witness, d)));
    }
    operator_ratios(c, out, "theorem2.opnorm", "||[b,M] f||_q / ||f||_p (lower bound)", bname, op::CommutatorHL{b});
  }
}

void theorem3(const Ctx& c, Checks& out) {
  const Grid& g = c.grid();
  const int d = g.dim();
  const auto mode = c.family();
  const auto cubes = enumerate_cubes(g, mode);
  for (const auto& [bname, b] : c.r.symbols) {
    if (nonnegative(b))
      lip_domination(c, out, "theorem3.lip_domination",
                     "|[b,M#] f(x)| <= 2 n^{beta/2} ||b||_Lip_beta M_beta f(x) for b >= 0", bname, b, 2.0,
                     [&](const GridFunction& f) { return commutator_sharp(b, f, mode).values().abs().eval(); });

    const PrefixSums sums(b);
    Worst w(Relation::LessEq);
    for (const auto& q : cubes) {
      const double k = doubling_constant(g, q.side, mode);
      if (k == 0.0) continue;
      const Eigen::ArrayXd s = sharp_max_of_restriction(b, sums, q, mode).values();
      const Box box = q.box(d);
      w.offer_cells(Eigen::ArrayXd::Constant(s.size(), std::abs(sums.average(q))), k * s,
                    [&](Eigen::Index i) { return to_string(q, d) + ", " + cell_in_box(g, box, i); });
    }
    add(out, "theorem3.mean_bound" + tag(bname),
        d == 1 ? "|b_Q| <= 2 M#(b chi_Q)(x) on Q" : "|b_Q| <= t^2/(2(t-1)) M#(b chi_Q)(x) on Q, |R| = t|Q|", w,
        c.tol.identity);

    const auto l = lip(c, b);
    for (const auto& [qname, q] : c.r.exponents) {
      const auto ls = lambda_sharp(b, c.beta, q, mode);
      out.push_back(monitored("theorem3.lambda_ratio" + tag(bname + "," + qname),
                              "||b||_{Lambda#_beta,q} / ||b||_Lip_beta", safe_ratio(ls.value, l.value),
                              Relation::GreaterEq, 0.0, 0.0, to_string(ls.witness, d)));
    }
    operator_ratios(c, out, "theorem3.opnorm", "||[b,M#] f||_q / ||f||_p (lower bound)", bname,
                    op::CommutatorSharp{b});
  }
}

// ------------------------------------------------------------ normequiv

struct Spread {
  double lo = INFINITY;
  double hi = 0.0;
  std::string lo_at, hi_at;
  void offer(double v, const std::string& at) {
    if (!(v > 0.0) || !std::isfinite(v)) return;
    if (v < lo) lo = v, lo_at = at;
    if (v > hi) hi = v, hi_at = at;
  }
  bool empty() const { return hi == 0.0; }
};

void spread_check(const Ctx& c, Checks& out, const std::string& id, const std::string& anchor, const Spread& s) {
  if (s.empty()) return;
  const double ratio = s.hi / s.lo;
  const std::string w = "max at " + s.hi_at + "; min at " + s.lo_at;
  if (c.cfg.monitored_fail_factor && ratio > *c.cfg.monitored_fail_factor) {
    out.push_back(verdict(id, anchor, ratio, Relation::LessEq, *c.cfg.monitored_fail_factor, 0.0, w));
    return;
  }
  out.push_back(monitored(id, anchor, ratio, Relation::LessEq, c.cfg.ratio_factor, 0.0, w));
}

void normequiv(const Ctx& c, Checks& out) {
  const int d = c.dim();
  std::vector<int> ns = c.cfg.refinement;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  std::vector<Spread> var(c.cfg.symbols.size()), star(c.cfg.symbols.size()), sharp(c.cfg.symbols.size());
  for (int n : ns) {
    const Resolved r = resolve(c.cfg, n);
    const std::string nn = "N=" + std::to_string(n);
    for (const auto& [bname, b] : r.symbols) {
      const std::size_t bi = std::size_t(
          std::find_if(c.cfg.symbols.begin(), c.cfg.symbols.end(), [&](const auto& s) { return s.name == bname; }) -
          c.cfg.symbols.begin());
      const auto l = lip_seminorm(b, c.beta, c.sampling);
      const bool pos = nonnegative(b);
      for (const auto& [qname, q] : r.exponents) {
        const std::string at = nn + "," + qname;
        const auto lv = lambda_var(b, c.beta, q, r.family);
        const double ratio = safe_ratio(lv.value, l.value);
        const auto make = l.exact ? verdict : monitored;
        out.push_back(make("normequiv.var_upper" + tag(bname + "," + at),
                           "||b||_{Lambda_beta,q} <= n^{beta/2} ||b||_Lip_beta", lv.value, Relation::LessEq,
                           c.dfac * l.value, c.tol.identity, to_string(lv.witness, d)));
        if (l.value > 0.0)
          out.push_back(monitored("normequiv.var_ratio" + tag(bname + "," + at),
                                  "||b||_{Lambda_beta,q} / ||b||_Lip_beta in [0.01, n^{beta/2}]", ratio,
                                  Relation::GreaterEq, 0.01, 0.0, to_string(lv.witness, d)));
        var[bi].offer(ratio, at);
        if (pos) {
          const auto ls = lambda_star(b, c.beta, q, r.family);
          const auto lsh = lambda_sharp(b, c.beta, q, r.family);
          out.push_back(monitored("normequiv.star_ratio" + tag(bname + "," + at),
                                  "||b||_{Lambda*_beta,q} / ||b||_Lip_beta for b >= 0", safe_ratio(ls.value, l.value),
                                  Relation::GreaterEq, 0.0, 0.0, to_string(ls.witness, d)));
          out.push_back(monitored("normequiv.sharp_ratio" + tag(bname + "," + at),
                                  "||b||_{Lambda#_beta,q} / ||b||_Lip_beta for b >= 0",
                                  safe_ratio(lsh.value, l.value), Relation::GreaterEq, 0.0, 0.0,
                                  to_string(lsh.witness, d)));
          star[bi].offer(safe_ratio(ls.value, l.value), at);
          sharp[bi].offer(safe_ratio(lsh.value, l.value), at);
        }
      }
    }
  }
  for (std::size_t i = 0; i < c.cfg.symbols.size(); ++i) {
    const std::string bname = c.cfg.symbols[i].name;
    spread_check(c, out, "normequiv.var_spread" + tag(bname), "max/min of ||b||_{Lambda_beta,q}/||b||_Lip_beta",
                 var[i]);
    spread_check(c, out, "normequiv.star_spread" + tag(bname), "max/min of ||b||_{Lambda*_beta,q}/||b||_Lip_beta",
                 star[i]);
    spread_check(c, out, "normequiv.sharp_spread" + tag(bname), "max/min of ||b||_{Lambda#_beta,q}/||b||_Lip_beta",
                 sharp[i]);
  }

  // Exponent splitting q0 = r q.
  const Grid& g = c.grid();
  const double r = c.cfg.split_r.value_or(d / (d - c.beta) + 1.0);
  const auto cubes = enumerate_cubes(g, c.family());
  for (const auto& [qname, q] : c.r.exponents) {
    SplitExponents s = [&] {
      try {
        return split_exponents(q, c.beta, r);
      } catch (const ExponentError& e) {
        throw ConfigError(std::string("split_r: ") + e.what());
      }
    }();
    Worst holder(Relation::Equal), pair(Relation::Equal), power(Relation::Equal);
    const Eigen::ArrayXd lhs = 1.0 / q.values();
    holder.offer_cells(lhs, 1.0 / s.q0.values() + 1.0 / s.r_conj_q.values(),
                       [&](Eigen::Index k) { return cell_name(g, k); });
    pair.offer_cells(1.0 / s.p0.values() - 1.0 / s.q0.values(), Eigen::ArrayXd::Constant(g.size(), c.beta / d),
                     [&](Eigen::Index k) { return cell_name(g, k); });
    for (const auto& cube : cubes)
      power.offer(indicator_norm(cube, s.q0), std::pow(indicator_norm(cube, q), 1.0 / r),
                  [&] { return to_string(cube, d); });
    const std::string t = tag(qname + ",r=" + format_number(r));
    add(out, "normequiv.split_holder" + t, "1/q = 1/(r q) + 1/(r' q)", holder, c.tol.oracle);
    add(out, "normequiv.split_pair" + t, "1/p0 - 1/q0 = beta/n, q0 = r q", pair, c.tol.oracle);
    add(out, "normequiv.split_indicator" + t, "||chi_Q||_{r q} = ||chi_Q||_q^{1/r}", power, c.tol.identity);
  }
}

// ------------------------------------------------------- counterexamples

void counterexamples(const Ctx& c, Checks& out) {
  const Grid& g = c.grid();
  const int d = g.dim();
  const auto mode = c.family();
  const auto minus = GridFunction::constant(g, -1.0);
  const auto plus = GridFunction::constant(g, 1.0);
  const double star_exact = lambda_star_of_minus_one(g, c.beta);
  const double sharp_unit = lambda_sharp_of_minus_one(g, c.beta, mode);
  // Larger cubes give at most 2 (2h)^-beta; below that the unit cubes win.
  const bool sharp_closed = 2.0 * std::pow(2.0 * g.spacing(), -c.beta) <= sharp_unit;
  for (const auto& [qname, q] : c.r.exponents) {
    const auto ls = lambda_star(minus, c.beta, q, mode);
    out.push_back(verdict("counterexamples.star_minus_one" + tag(qname), "||-1||_{Lambda*_beta,q} = 2 h^-beta",
                          ls.value, Relation::Equal, star_exact, c.tol.sharpness, to_string(ls.witness, d)));
    const auto lv = lambda_var(minus, c.beta, q, mode);
    out.push_back(verdict("counterexamples.var_minus_one" + tag(qname), "||-1||_{Lambda_beta,q} = 0", lv.value,
                          Relation::Equal, 0.0, c.tol.identity, to_string(lv.witness, d)));
    const auto lsh = lambda_sharp(minus, c.beta, q, mode);
    out.push_back(verdict("counterexamples.sharp_minus_one" + tag(qname),
                          "||-1||_{Lambda#_beta,q} = (1 + 2 M#(chi_Q)) h^-beta on unit cubes", lsh.value,
                          sharp_closed ? Relation::Equal : Relation::GreaterEq, sharp_unit, c.tol.sharpness,
                          to_string(lsh.witness, d)));
    const auto lp = lambda_star(plus, c.beta, q, mode);
    out.push_back(verdict("counterexamples.star_plus_one" + tag(qname), "||+1||_{Lambda*_beta,q} = 0", lp.value,
                          Relation::Equal, 0.0, c.tol.identity, to_string(lp.witness, d)));
  }

  std::vector<int> ns = c.cfg.refinement;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  const double gamma = c.cfg.nonlipschitz_gamma.value_or(c.beta / 2.0);
  const FunctionSpec cusp{"|x-1/2|^gamma", formula::Power{std::vector<double>(std::size_t(d), 0.5), gamma}};
  double previous = 0.0, first = 0.0;
  int first_n = 0, last_n = 0;
  const auto q2 = [&](const Grid& gg) { return constant_exponent(gg, 2.0); };
  for (int n : ns) {
    const Grid gn = with_cells(c.cfg.grid, n);
    const auto l = lip_seminorm(realize(cusp, gn), c.beta, c.sampling);
    const std::string nn = "N=" + std::to_string(n);
    if (previous > 0.0)
      out.push_back(verdict("counterexamples.cusp_growth" + tag(nn),
                            "|x-1/2|^gamma, gamma < beta: ||b||_Lip_beta grows under refinement", l.value,
                            Relation::GreaterEq, previous, 0.0, to_string(l.witness, d)));
    if (first == 0.0) first = l.value, first_n = n;
    previous = l.value;
    last_n = n;

    const auto ls = lambda_star(GridFunction::constant(gn, -1.0), c.beta, q2(gn), resolve_family(c.cfg.cube_family, gn));
    out.push_back(verdict("counterexamples.star_divergence" + tag(nn), "||-1||_{Lambda*_beta,2} = 2 h^-beta",
                          ls.value, Relation::Equal, lambda_star_of_minus_one(gn, c.beta), c.tol.sharpness,
                          to_string(ls.witness, d)));
  }
  if (last_n > first_n && first > 0.0) {
    out.push_back(monitored("counterexamples.cusp_rate",
                            "growth of ||b||_Lip_beta vs (N_last/N_first)^{beta-gamma}", previous / first,
                            Relation::GreaterEq, std::pow(double(last_n) / first_n, c.beta - gamma), 0.0,
                            "N=" + std::to_string(first_n) + ".." + std::to_string(last_n)));
  }
}

using Runner = void (*)(const Ctx&, Checks&);

const std::vector<std::pair<std::string, Runner>>& runners() {
  static const std::vector<std::pair<std::string, Runner>> r{
      {"lemmas", lemmas},     {"identities", identities}, {"theorem1", theorem1},
      {"theorem2", theorem2}, {"theorem3", theorem3},     {"normequiv", normequiv},
      {"counterexamples", counterexamples}};
  return r;
}

}  // namespace

double unit_cube_sharp_of_indicator(const Grid& g, CubeFamily mode) {
  double best = 0.0;
  for (int m : side_lengths(g, mode)) {
    if (m < 2) continue;
    const double a = std::pow(double(m), -g.dim());
    best = std::max(best, 2.0 * a * (1.0 - a));
  }
  return best;
}

double lambda_star_of_minus_one(const Grid& g, double beta) { return 2.0 * std::pow(g.spacing(), -beta); }

double lambda_sharp_of_minus_one(const Grid& g, double beta, CubeFamily mode) {
  return (1.0 + 2.0 * unit_cube_sharp_of_indicator(g, mode)) * std::pow(g.spacing(), -beta);
}

double doubling_constant(const Grid& g, int side, CubeFamily mode) {
  for (int m : side_lengths(g, mode)) {
    if (m < side) continue;
    const double t = std::pow(double(m) / side, g.dim());
    if (t >= 2.0) return t * t / (2.0 * (t - 1.0));
  }
  return 0.0;
}

std::vector<Check> scenario_checks(const ScenarioConfig& cfg, const std::string& scenario) {
  const auto& all = runners();
  const bool every = scenario == "all";
  if (!every && std::none_of(all.begin(), all.end(), [&](const auto& r) { return r.first == scenario; }))
    throw ConfigError("unknown scenario \"" + scenario + "\"");
  const Ctx ctx{cfg,
                resolve(cfg),
                cfg.beta,
                std::pow(double(cfg.grid.dim), cfg.beta / 2.0),
                cfg.tolerances,
                LipSampling{cfg.lip_random_pairs, cfg.lip_seed}};
  Checks out;
  for (const auto& [name, run] : all)
    if (every || name == scenario) run(ctx, out);
  std::stable_sort(out.begin(), out.end(), [](const Check& a, const Check& b) { return a.check_id < b.check_id; });
  return out;
}

Report run_scenario(const ScenarioConfig& cfg, const std::string& scenario) {
  Report r;
  r.scenario = scenario;
  r.checks = scenario_checks(cfg, scenario);
  r.config = to_json(cfg);
  r.timestamp = utc_timestamp();
  return r;
}

}  // namespace maxlip
