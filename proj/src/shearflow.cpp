#include "adlab/shearflow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace adlab::shear {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

const char* to_string(Direction d) { return d == Direction::Horizontal ? "horizontal" : "vertical"; }

double ShearStage::envelope_value(double t) const { return chi.value(mirrored ? 2.0 - t : t); }

envelope::Jet ShearStage::envelope_derivatives(double t) const {
  if (!mirrored) return chi.derivatives(t);
  envelope::Jet j = chi.derivatives(2.0 - t);
  for (int l = 1; l <= envelope::kJetOrder; l += 2) j[l] = -j[l];
  return j;
}

double ShearStage::envelope_integral(double ta, double tb) const {
  if (!mirrored) return chi.integral(ta, tb);
  return chi.integral(2.0 - tb, 2.0 - ta);
}

double ShearStage::envelope_integral_squared(double ta, double tb) const {
  if (!mirrored) return chi.integral_squared(ta, tb);
  return chi.integral_squared(2.0 - tb, 2.0 - ta);
}

double ShearStage::displacement_factor(double ta, double tb) const {
  return sign * amplitude * envelope_integral(ta, tb);
}

double ShearStage::profile(double t, double y) const {
  return sign * amplitude * envelope_value(t) * std::sin(kTwoPi * mode * y);
}

const ShearStage* ShearSchedule::active(double t) const {
  for (const auto& s : stages)
    if (s.window.contains(t)) return &s;
  return nullptr;
}

ShearSchedule build_schedule(const cascade::ScaleSequences& seq, const ProfileChoice& profile) {
  if (!(profile.gain > 0.0)) throw std::invalid_argument("profile gain must be positive");
  if (!(profile.window_cap > 0.0) || profile.window_cap > 1.5)
    throw std::invalid_argument("window_cap must lie in (0, 1.5]: four windows per level share 6 a_q^gamma");

  ShearSchedule s;
  s.sequences = seq;
  s.profile = profile;
  const double g = seq.gamma;
  for (int q = 0; q < seq.depth(); ++q) {
    const Interval I{1.0 - seq.T_at(q), 1.0 - seq.T_at(q + 1)};
    const Interval J{1.0 + seq.T_at(q + 1), 1.0 + seq.T_at(q)};
    s.I.push_back(I);
    s.J.push_back(J);

    const double e_q = seq.a[static_cast<std::size_t>(q)].exponent;
    const double a_gamma = seq.value({1.0, e_q * g});
    const double L = I.length();
    const double w = std::min(13.0 * L / 32.0, profile.window_cap * a_gamma);
    const double gap = (L - 2.0 * w) / 3.0;
    if (!(w > 0.0) || !(gap > 0.0))
      throw std::invalid_argument("stage windows do not fit inside I_" + std::to_string(q));

    const double lambda_next = seq.lambda_at(q + 1);
    const double mode_real = std::round(lambda_next);
    if (!(mode_real >= 1.0 && mode_real < 1e9))
      throw std::invalid_argument("lambda_" + std::to_string(q + 1) + " cannot be sampled on a grid");

    const double starts[2] = {I.lo + gap, I.lo + 2.0 * gap + w};
    const Direction dirs[2] = {Direction::Vertical, Direction::Horizontal};
    for (int i = 0; i < 2; ++i) {
      ShearStage st;
      st.direction = dirs[i];
      st.level = q;
      st.window = {starts[i], starts[i] + w};
      st.amplitude = profile.gain * seq.value({1.0, e_q * (1.0 - g)});
      st.frequency = lambda_next;
      st.mode = static_cast<int>(mode_real);
      st.chi = envelope::Envelope(starts[i], w);
      s.stages.push_back(st);

      ShearStage m = st;
      m.window = {2.0 - st.window.hi, 2.0 - st.window.lo};
      m.sign = -1;
      m.mirrored = true;
      s.stages.push_back(m);
    }
  }
  std::sort(s.stages.begin(), s.stages.end(),
            [](const ShearStage& a, const ShearStage& b) { return a.window.lo < b.window.lo; });
  return s;
}

const ShearStage* TruncatedField::active(double t) const {
  const ShearStage* s = schedule->active(t);
  return s != nullptr && s->level < q_cut ? s : nullptr;
}

std::vector<const ShearStage*> TruncatedField::stages() const {
  std::vector<const ShearStage*> out;
  for (const auto& s : schedule->stages)
    if (s.level < q_cut) out.push_back(&s);
  return out;
}

int TruncatedField::finest_mode() const {
  int m = 0;
  for (const auto* s : stages()) m = std::max(m, s->mode);
  return m;
}

TruncatedField truncate(const ShearSchedule& schedule, int q) {
  if (q < 0 || q > schedule.sequences.depth()) throw std::out_of_range("truncation level outside [0, Q]");
  return {&schedule, q};
}

TruncatedField full_field(const ShearSchedule& schedule) { return truncate(schedule, schedule.sequences.depth()); }

int resolution_floor(const ShearSchedule& schedule, int q_cut) {
  const int m = truncate(schedule, q_cut).finest_mode();
  return m == 0 ? 8 : 8 * m;
}

namespace {

ProfileSample sample_stage(const ShearStage* stage, double t, int n) {
  if (n < 1) throw std::invalid_argument("sample size must be positive");
  ProfileSample out;
  out.values.assign(static_cast<std::size_t>(n), 0.0);
  if (stage == nullptr) return out;
  out.active = true;
  out.direction = stage->direction;
  out.level = stage->level;
  const double c = stage->sign * stage->amplitude * stage->envelope_value(t);
  const long long nn = n;
  for (long long j = 0; j < nn; ++j) {
    const long long idx = (static_cast<long long>(stage->mode) * j) % nn;
    out.values[static_cast<std::size_t>(j)] = c * std::sin(kTwoPi * static_cast<double>(idx) / static_cast<double>(nn));
  }
  return out;
}

}  // namespace

ProfileSample sample_velocity(const ShearSchedule& schedule, double t, int n) {
  return sample_stage(schedule.active(t), t, n);
}

ProfileSample sample_velocity(const TruncatedField& field, double t, int n) {
  return sample_stage(field.active(t), t, n);
}

std::vector<RegularityRow> verify_regularity(const ShearSchedule& schedule, int q, int k_max, int l_max) {
  if (k_max < 0 || k_max > 4 || l_max < 0 || l_max > 4)
    throw std::invalid_argument("verify_regularity supports k, l <= 4");
  if (q < 0 || q >= schedule.levels()) throw std::out_of_range("level without stages");

  const auto& seq = schedule.sequences;
  const double e_q = seq.a_power(q).exponent;
  const double e_next = seq.a_power(q + 1).exponent;
  const double ed = seq.params.epsilon * seq.params.delta;

  std::vector<double> chi_sup(static_cast<std::size_t>(l_max) + 1, 0.0);
  std::vector<const ShearStage*> level_stages;
  for (const auto& st : schedule.stages) {
    if (st.level != q) continue;
    level_stages.push_back(&st);
    constexpr int samples = 8192;
    for (int i = 0; i <= samples; ++i) {
      const double t = st.window.lo + st.window.length() * i / samples;
      const envelope::Jet j = st.envelope_derivatives(t);
      for (int l = 0; l <= l_max; ++l)
        chi_sup[static_cast<std::size_t>(l)] = std::max(chi_sup[static_cast<std::size_t>(l)], std::abs(j[l]));
    }
  }

  std::vector<RegularityRow> rows;
  for (int k = 0; k <= k_max; ++k) {
    for (int l = 0; l <= l_max; ++l) {
      RegularityRow r;
      r.k = k;
      r.l = l;
      for (const auto* st : level_stages) {
        const double spatial = std::pow(kTwoPi * st->mode, k);
        r.measured = std::max(r.measured, st->amplitude * spatial * chi_sup[static_cast<std::size_t>(l)]);
      }
      r.scale = seq.value({1.0, e_q * (1.0 - seq.gamma) - k * (1.0 + ed) * e_next - l * seq.gamma * e_q});
      r.ratio = r.measured / r.scale;
      rows.push_back(r);
    }
  }
  return rows;
}

double support_measure(const ShearSchedule& schedule, int q) {
  double total = 0.0;
  for (const auto& st : schedule.stages)
    if (st.level == q) total += st.window.length();
  return total;
}

std::string regularity_csv(const ShearSchedule& schedule, int k_max, int l_max) {
  std::ostringstream out;
  out << "q,k,l,measured,scale,ratio\n";
  char buf[160];
  for (int q = 0; q < schedule.levels(); ++q) {
    for (const auto& r : verify_regularity(schedule, q, k_max, l_max)) {
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g\n", q, r.k, r.l, r.measured, r.scale, r.ratio);
      out << buf;
    }
  }
  return out.str();
}

}  // namespace adlab::shear
