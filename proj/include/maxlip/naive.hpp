#pragma once

#include "maxlip/grid.hpp"

// Reference implementations: for every cell, loop over the family cubes
// containing it and sum directly. Single-threaded, no prefix tables.
namespace maxlip::naive {

GridFunction hl_max(const GridFunction& f, CubeFamily mode);
GridFunction sharp_max(const GridFunction& f, CubeFamily mode);
GridFunction frac_max(const GridFunction& f, double alpha, CubeFamily mode);
// Zero outside q0.
GridFunction local_max(const GridFunction& b, const Cube& q0);
GridFunction max_commutator(const GridFunction& b, const GridFunction& f, CubeFamily mode);
GridFunction commutator_hl(const GridFunction& b, const GridFunction& f, CubeFamily mode);
GridFunction commutator_sharp(const GridFunction& b, const GridFunction& f, CubeFamily mode);

}  // namespace maxlip::naive
