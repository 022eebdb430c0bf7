#pragma once

#include <string>
#include <variant>

#include "maxlip/grid.hpp"
#include "maxlip/prefix_sum.hpp"

namespace maxlip {

// Values of a function defined only on the cells of one cube, stored
// row-major in cube-local order.
class LocalField {
 public:
  LocalField(Grid grid, Cube domain, Eigen::ArrayXd values);

  const Grid& grid() const { return grid_; }
  const Cube& domain() const { return domain_; }
  const Eigen::ArrayXd& values() const { return values_; }

  // Throws GridError for cells outside the domain.
  double at(const Cell& c) const;

  // Zero outside the domain.
  GridFunction extend_by_zero() const;

 private:
  Grid grid_;
  Cube domain_;
  Eigen::ArrayXd values_;
};

// Hardy-Littlewood maximal function: max over family cubes containing the
// cell of the average of |f|.
GridFunction hl_max(const GridFunction& f, CubeFamily mode = CubeFamily::Full);

// Sharp maximal function: max over containing cubes of the mean of |f - f_Q|.
GridFunction sharp_max(const GridFunction& f, CubeFamily mode = CubeFamily::Full);

// Fractional maximal function |Q|^{alpha/dim - 1} integral_Q |f|, 0 < alpha < dim.
GridFunction frac_max(const GridFunction& f, double alpha, CubeFamily mode = CubeFamily::Full);

// M_{Q0}(b): max over all cubes Q with x in Q and Q inside Q0 of the
// average of |b|. Defined on the cells of Q0.
LocalField local_max(const GridFunction& b, const Cube& q0);
// Same, reusing a prefix table of |b| across many cubes.
LocalField local_max(const PrefixSums& abs_b, const Cube& q0);

// M-sharp(b chi_Q) evaluated on the cells of Q.
LocalField sharp_max_of_restriction(const GridFunction& b, const Cube& q, CubeFamily mode = CubeFamily::Full);
// `sums` must be the prefix table of b itself.
LocalField sharp_max_of_restriction(const GridFunction& b, const PrefixSums& sums, const Cube& q, CubeFamily mode);

// M_b(f)(x) = max over containing cubes of |Q|^{-1} integral_Q |b(x)-b(y)||f(y)| dy.
// The kernel depends on x, so the cost is one prefix table per cell.
GridFunction max_commutator(const GridFunction& b, const GridFunction& f, CubeFamily mode = CubeFamily::Full);

// [b,M](f) = b M(f) - M(b f)
GridFunction commutator_hl(const GridFunction& b, const GridFunction& f, CubeFamily mode = CubeFamily::Full);

// [b,M-sharp](f) = b M-sharp(f) - M-sharp(b f)
GridFunction commutator_sharp(const GridFunction& b, const GridFunction& f, CubeFamily mode = CubeFamily::Full);

namespace op {
struct HardyLittlewood {};
struct Sharp {};
struct Fractional {
  double alpha;
};
struct Local {
  Cube cube;
};
struct MaxCommutator {
  GridFunction b;
};
struct CommutatorHL {
  GridFunction b;
};
struct CommutatorSharp {
  GridFunction b;
};
}  // namespace op

using OperatorTag = std::variant<op::HardyLittlewood, op::Sharp, op::Fractional, op::Local, op::MaxCommutator,
                                 op::CommutatorHL, op::CommutatorSharp>;

std::string name(const OperatorTag& tag);

// Local outputs are extended by zero outside their cube.
GridFunction apply(const OperatorTag& tag, const GridFunction& f, CubeFamily mode = CubeFamily::Full);

// Max abs cellwise deviation between the fast path and the nested-loop
// oracle, on the Full family. Only for small grids: N <= 64 in dim 1,
// N <= 16 in dim 2.
double oracle_check(const OperatorTag& tag, const GridFunction& f);

}  // namespace maxlip
