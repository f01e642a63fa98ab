#ifndef DARKLAT_LEVEL_SCHEME_HPP
#define DARKLAT_LEVEL_SCHEME_HPP

#include <stdexcept>

#include "darklat/angular.hpp"
#include "darklat/half_int.hpp"

namespace darklat {

/// A radiative F_g -> F_e transition. gamma is the single-atom spontaneous
/// decay rate; all other rates in the library are quoted in units of it.
struct LevelScheme {
  HalfInt f_ground;
  HalfInt f_excited;
  double gamma = 1.0;

  LevelScheme(HalfInt fg, HalfInt fe, double decay_rate = 1.0)
      : f_ground(fg), f_excited(fe), gamma(decay_rate) {
    if (fg.twice() < 0 || fe.twice() < 0)
      throw std::invalid_argument("angular momenta must be non-negative");
    if (!fg.is_half_odd() || !fe.is_half_odd())
      throw std::invalid_argument("fermionic levels require half-odd-integer F");
    if (std::abs(fe.twice() - fg.twice()) >= 4)
      throw std::invalid_argument("|F_e - F_g| >= 2 transitions are not dipole allowed");
    if (gamma <= 0.0) throw std::invalid_argument("decay rate must be positive");
  }

  bool operator==(const LevelScheme&) const = default;
};

/// Transition Clebsch-Gordan coefficient C^q_m = <F_g,m; 1,q | F_e,m+q>.
/// Returns 0 when the target projection falls outside the excited manifold.
inline double cg_transition(const LevelScheme& scheme, HalfInt m, Polarization q) {
  if (!projection_valid(scheme.f_ground, m))
    throw std::invalid_argument("m is not a valid ground-state projection");
  const HalfInt me = m + HalfInt(q_of(q));
  if (!projection_valid(scheme.f_excited, me)) return 0.0;
  return clebsch_gordan(scheme.f_ground, m, HalfInt(1), HalfInt(q_of(q)), scheme.f_excited, me);
}

}  // namespace darklat

#endif
