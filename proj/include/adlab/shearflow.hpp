#pragma once

#include <string>
#include <vector>

#include "adlab/cascade.hpp"
#include "adlab/envelope.hpp"

namespace adlab::shear {

/// Horizontal: u = (W(t, x2), 0). Vertical: u = (0, W(t, x1)).
enum class Direction { Horizontal, Vertical };

const char* to_string(Direction d);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double t) const { return t >= lo && t <= hi; }
};

/// Knobs of the synthesized profile. The defaults give sup |u| = a_q^{1-gamma}
/// on each stage.
struct ProfileChoice {
  double gain = 1.0;        ///< multiplies a_q^{1-gamma}; regularity ratios scale with it
  double window_cap = 1.5;  ///< stage window is at most window_cap * a_q^gamma
};

/// One shear stage: W(t, y) = sign * amplitude * chi(t) * sin(2 pi mode y).
///
/// Stages in J_q mirror those in I_q: their envelope is the I_q envelope read
/// at 2 - t and their sign is -1, so u(t) = -u(2 - t) holds by construction.
struct ShearStage {
  Direction direction = Direction::Horizontal;
  int level = 0;
  Interval window;        ///< closed time window; the envelope vanishes near both ends
  double amplitude = 0.0; ///< gain * a_q^{1-gamma}
  double frequency = 0.0; ///< lambda_{q+1}
  int mode = 1;           ///< lambda_{q+1} rounded to a positive integer
  int sign = 1;
  bool mirrored = false;
  envelope::Envelope chi;  ///< always the I_q window envelope

  /// chi evaluated in this stage's own time (mirrored stages read 2 - t).
  double envelope_value(double t) const;
  /// d^l/dt^l of the stage envelope (sign of the stage not included).
  envelope::Jet envelope_derivatives(double t) const;
  /// Integral over [ta, tb] of the stage envelope.
  double envelope_integral(double ta, double tb) const;
  /// Integral over [ta, tb] of the squared stage envelope.
  double envelope_integral_squared(double ta, double tb) const;

  /// sign * amplitude * integral of chi: the shear displacement factor over [ta, tb].
  double displacement_factor(double ta, double tb) const;

  /// W(t, y).
  double profile(double t, double y) const;
};

struct ShearSchedule {
  cascade::ScaleSequences sequences;
  ProfileChoice profile;
  std::vector<ShearStage> stages;  ///< sorted by window start
  std::vector<Interval> I;         ///< I_q for the schedule levels q = 0..Q-1
  std::vector<Interval> J;

  /// Levels that carry stages: 0..Q-1. The top interval (1 - T_Q, 1 + T_Q) is velocity-free.
  int levels() const { return static_cast<int>(I.size()); }

  /// Stage whose window contains t, or nullptr.
  const ShearStage* active(double t) const;
};

/// Two stages per level (vertical, then horizontal) in I_q, mirrored in J_q.
/// Throws std::invalid_argument if a level's windows cannot fit the budget.
ShearSchedule build_schedule(const cascade::ScaleSequences& seq, const ProfileChoice& profile = {});

/// u_q = u restricted to K_q = [0, 1 - T_q] U [1 + T_q, 2]. Only stages of level < q_cut survive.
struct TruncatedField {
  const ShearSchedule* schedule = nullptr;
  int q_cut = 0;

  const ShearStage* active(double t) const;
  /// Stages of u_q in time order.
  std::vector<const ShearStage*> stages() const;
  /// Finest stage mode present in u_q (0 when u_q vanishes).
  int finest_mode() const;
};

/// Requires 0 <= q <= Q. truncate(s, Q) reproduces u.
TruncatedField truncate(const ShearSchedule& schedule, int q);
/// u itself.
TruncatedField full_field(const ShearSchedule& schedule);

/// 8 * round(lambda_{q_cut}): grid points needed to resolve u_{q_cut} (8 for the zero field).
int resolution_floor(const ShearSchedule& schedule, int q_cut);

struct ProfileSample {
  bool active = false;
  Direction direction = Direction::Horizontal;
  int level = -1;
  std::vector<double> values;  ///< W(t, j / n), j = 0..n-1
};

/// Active stage's profile on n points (zero profile when no stage is active).
ProfileSample sample_velocity(const ShearSchedule& schedule, double t, int n);
ProfileSample sample_velocity(const TruncatedField& field, double t, int n);

struct RegularityRow {
  int k = 0;
  int l = 0;
  double measured = 0.0;  ///< sup over (I_q U J_q) x T^2 of |d_t^l grad^k u|
  double scale = 0.0;     ///< a_q^{1-gamma} a_{q+1}^{-k(1+eps delta)} a_q^{-l gamma}
  double ratio = 0.0;
};

/// Ratios for k <= k_max, l <= l_max (both at most 4). Temporal sups are read
/// from the analytic envelope derivatives on a dense grid of each window.
std::vector<RegularityRow> verify_regularity(const ShearSchedule& schedule, int q, int k_max, int l_max);

/// Total window length of the stages at level q inside I_q and J_q.
double support_measure(const ShearSchedule& schedule, int q);

/// CSV rendering of verify_regularity for every level.
std::string regularity_csv(const ShearSchedule& schedule, int k_max, int l_max);

}  // namespace adlab::shear
