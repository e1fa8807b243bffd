#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "ostrovsky/grid.hpp"
#include "ostrovsky/propagator.hpp"

namespace ostrovsky {

/// (sum (1 + xi^2)^s |u_hat|^2 dxi)^{1/2}, s in [0, 1].
double hs_norm(const SpectralField& field, double s);

/// || |xi|^b u_hat ||, b in [-1, 1]; mean-zero input required for b < 0.
double hom_norm(const SpectralField& field, double b);

/// (sum |x_j|^{2r} |u_j|^2 dx)^{1/2} over the fundamental domain, r in [0, 1].
double weighted_norm(const SpectralField& field, double r);

/// ||u||_{H^s} + ||d/dx^{-1} u||.
double xs_norm(const SpectralField& field, double s);

/// ||u||_{H^s} + ||D^{-s} u|| + || |x|^r u ||: the Z_{s,r} magnitude.
double z_norm(const SpectralField& field, double s, double r);

/// Time-indexed states on a uniform grid t_m = m dt, m = 0..M.
struct Trajectory {
  GridPtr grid;
  Sign sign = Sign::plus;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<SpectralField> states;

  double final_time() const { return times.empty() ? 0.0 : times.back(); }
  std::size_t size() const { return states.size(); }
};

/// Builds times m*dt for the given states and validates the result.
Trajectory make_trajectory(GridPtr grid, Sign sign, double dt, std::vector<SpectralField> states);

/// Throws PreconditionError unless states share one grid, are mean-zero and
/// the time grid is strictly increasing and uniform.
void validate_trajectory(const Trajectory& traj);

/// The six seminorms of the solution space on [0, T] (time integrals by
/// composite Simpson, L^inf by grid/time-level max):
///   n1 sup_t ||v||_{H^s}          n2 sup_t ||d/dx^{-1} v||
///   n3 ||v_x||_{L^4_T L^inf_x}    n4 ||D^s v_x||_{L^inf_x L^2_T} (d_x^2 at s = 1)
///   n5 ||v||_{L^2_x L^inf_T}      n6 sup_t || |x|^{s/2} v ||
struct Seminorms {
  std::array<double, 6> n{};
  double total() const { return n[0] + n[1] + n[2] + n[3] + n[4] + n[5]; }
};

/// Requires at least four states.
Seminorms solution_seminorms(std::span<const SpectralField> states, double dt, double s);

struct SliceNorms {
  double t = 0.0;
  double l2 = 0.0;
  double hs = 0.0;
  double hom_minus_s = 0.0;
  double weighted = 0.0;
};

struct NormReport {
  double s = 0.0;
  double r = 0.0;
  std::vector<SliceNorms> slices;
  SliceNorms sup;  // per-column sup over time, t = -1
  Seminorms seminorms;
  double xT = 0.0;
};

/// s in (3/4, 1]; weight exponent r = s/2.
NormReport trajectory_norms(const Trajectory& traj, double s);

SliceNorms slice_norms(const SpectralField& field, double t, double s);

/// Header `t,l2,hs,hom_minus_s,weighted,n1,n2,n3,n4,n5,n6,xT`; per-time rows
/// leave n1..xT empty, the closing trajectory row has t = -1.
void write_norm_csv(std::ostream& os, const NormReport& report);

}  // namespace ostrovsky
