// Copyright 2026 The qchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qchan/qchan.hpp"
#include "qchan_cli.hpp"

using namespace qchan;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %2d: %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL",
              id, title, o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

std::string fixture(const std::string& name) {
  return std::string(QCHAN_TEST_DATA) + "/" + name + ".json";
}

Channel sample(std::uint64_t seed, std::uint64_t index, int m, int n, int k) {
  return sample_channel(SamplerConfig{seed, m, n, k, 1}, index);
}

// 1. Choi/Kraus round trip.
Outcome round_trip() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int count = 0;
  for (int t = 0; t < 200; ++t) {
    const int m = 2 + t % 3, n = 2 + (t / 3) % 3;
    const int k0 = min_choi_rank(m, n);
    const int k = k0 + (t / 9) % (m - k0 + 1);
    const Channel ch = sample(101, std::uint64_t(t), m, n, k);
    const CMatrix z = choi_of_operators(ch.kraus().operators());
    const KrausSet ks = kraus_from_choi(ch.choi());
    const CMatrix z2 = choi_of_operators(ks.operators());
    worst = std::max({worst, relative_residual(z, ch.choi().matrix()),
                      relative_residual(z2, ch.choi().matrix())});
    ++count;
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 10.0,
          fmt("max residual %.3g over %d channels in %.2f s (limits 1e-10, 10 s)",
              worst, count, secs)};
}

// 2. The two extremality criteria agree.
Outcome equivalence() {
  const auto t0 = Clock::now();
  int flagged = 0, disagreements = 0, total = 0;
  for (int t = 0; t < 1000; ++t) {
    const int m = 2 + t % 2, n = 2 + (t / 2) % 2;
    const int k0 = min_choi_rank(m, n);
    const int k = k0 + (t / 4) % (m - k0 + 1);
    const ExtremalityVerdict v = is_extreme(sample(102, std::uint64_t(t), m, n, k));
    ++total;
    if (v.conditioning_flag) {
      ++flagged;
      continue;
    }
    if (!v.method_agreement) ++disagreements;
  }
  const double frac = double(flagged) / total;
  const double secs = seconds_since(t0);
  return {disagreements == 0 && frac <= 0.01 && secs < 60.0,
          fmt("%d unflagged disagreements, flagged %d/%d = %.4f in %.2f s "
              "(limits 0, 0.01, 60 s)",
              disagreements, flagged, total, frac, secs)};
}

// 3. Channels with Choi rank above m split into lower-rank channels.
Outcome rank_bound() {
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int m = 2 + t % 2, n = 2 + (t / 2) % 2;
    const int k = m + 1 + (t / 4) % (m * n - m);
    const Channel ch = sample(103, std::uint64_t(t), m, n, k);
    const ExtremalityVerdict v = is_extreme(ch);
    if (v.extreme || !v.split) {
      ++bad;
      continue;
    }
    const ConvexSplit& s = *v.split;
    worst = std::max(worst, s.residual);
    bool ok = s.residual <= 1e-8 && s.first.choi_rank() < k &&
              s.second.choi_rank() < k && s.weight > 0 && s.weight < 1;
    for (const Channel* c : {&s.first, &s.second}) {
      const ChannelReport r = validate(c->choi().hermitian(), m, n);
      ok = ok && r.is_cp && r.is_tp;
    }
    if (!ok) ++bad;
  }
  return {bad == 0, fmt("%d/200 failures, max split residual %.3g (limit 1e-8)",
                        bad, worst)};
}

// 4 and 5. Fractions of extreme samples.
Outcome fraction(int m, int n, int k, int count, double min_fraction,
                 std::uint64_t seed) {
  const ExperimentResult e =
      extreme_fraction_experiment(SamplerConfig{seed, m, n, k, count}, {}, 1);
  const double all = double(e.extreme) / count;
  return {all >= min_fraction,
          fmt("(%d,%d,%d): %d/%d extreme = %.4f, flagged %d (limit >= %.2f)", m,
              n, k, e.extreme, count, all, e.flagged, min_fraction)};
}

// 6 and 7. Pure-to-pure witnesses and the output rank identities.
struct ImageCorpus {
  int failures = 0;
  double worst_sigma = 0.0;
  double worst_defect = 0.0;
  int r_mismatch = 0;
  int rank_disagreements = 0;
  int near = 0;
};

ImageCorpus image_corpus() {
  ImageCorpus c;
  for (int t = 0; t < 200; ++t) {
    const int m = 2 + t % 2;
    const Channel ch = sample(106, std::uint64_t(t), m, 2, m);
    const PureToPureResult r = find_pure_to_pure(ch);
    c.worst_sigma = std::max(c.worst_sigma, r.sigma2);
    c.worst_defect = std::max(c.worst_defect, r.purity_defect);
    if (!(r.sigma2 <= 1e-7 && r.purity_defect <= 1e-6)) ++c.failures;
    if (image_rank_report(ch).r != m) ++c.r_mismatch;
    Rng rng = Rng::stream(107, std::uint64_t(t));
    for (int s = 0; s < 50; ++s) {
      const OutputRankCheck o = output_rank_check(ch, rng.unit_vector(m));
      if (o.near_threshold)
        ++c.near;
      else if (o.output_rank != o.pencil_rank)
        ++c.rank_disagreements;
    }
  }
  return c;
}

// 8. Qubit classification.
Outcome qubit_classification() {
  const CanonicalForm22 ad = canonical_form_22(channels::amplitude_damping(0.5));
  const double dy = std::abs(std::abs(ad.y) - std::sqrt(0.5));
  const double dc = std::abs(ad.c - 0.5);
  const double ds = std::abs(ad.s);
  const bool ad_ok = classify_image_22(ad).image_class == ImageClass22::OnePure &&
                     dy <= 1e-8 && dc <= 1e-8 && ds <= 1e-8;
  const bool meas_ok =
      classify_image_22(canonical_form_22(channels::measurement(2))).image_class ==
      ImageClass22::Interval;
  double worst = 0.0;
  for (int t = 0; t < 500; ++t)
    worst = std::max(worst,
                     canonical_form_22(sample(108, std::uint64_t(t), 2, 2, 2)).residual);
  return {ad_ok && meas_ok && worst <= 1e-8,
          fmt("AD OnePure=%s deviations (%.2g, %.2g, %.2g); measurement "
              "Interval=%s; max residual %.3g over 500 (limit 1e-8)",
              ad_ok ? "yes" : "no", dy, dc, ds, meas_ok ? "yes" : "no", worst)};
}

// 9. Non-unital rank-2 qubit channels are extreme.
Outcome non_unital() {
  int extreme = 0, tested = 0;
  for (std::uint64_t t = 0; tested < 200; ++t) {
    const Channel ch = sample(109, t, 2, 2, 2);
    if (validate(ch.choi().hermitian(), 2, 2).is_unital) continue;
    ++tested;
    if (is_extreme_22(ch).extreme) ++extreme;
  }
  return {extreme == tested, fmt("%d/%d extreme", extreme, tested)};
}

// 10. The qutrit-to-qubit algorithm.
Outcome qutrit() {
  const auto t0 = Clock::now();
  const bool fx1 = is_extreme_32(io::read_channel(fixture("qutrit_case1_extreme"))).extreme;
  const bool fx2 = is_extreme_32(io::read_channel(fixture("qutrit_case1_nonextreme"))).extreme;
  int unflagged_dis = 0, flagged = 0, extreme = 0;
  for (int t = 0; t < 300; ++t) {
    const Verdict32 v = is_extreme_32(sample(110, std::uint64_t(t), 3, 2, 3));
    if (v.extreme) ++extreme;
    if (v.conditioning_flag) {
      ++flagged;
      continue;
    }
    if (!v.agrees_with_general) ++unflagged_dis;
  }
  const double secs = seconds_since(t0);
  return {fx1 && !fx2 && unflagged_dis == 0 && secs < 300.0,
          fmt("fixtures extreme=%s/non-extreme=%s; %d unflagged disagreements, "
              "%d flagged, %d/300 extreme in %.2f s (limit 300 s)",
              fx1 ? "yes" : "no", !fx2 ? "yes" : "no", unflagged_dis, flagged,
              extreme, secs)};
}

// 11. Minimum output entropy.
Outcome entropy() {
  const double dep = min_output_entropy(channels::depolarizing_qubit()).s_min_estimate;
  const bool dep_ok = std::abs(dep - std::log(2.0)) <= 1e-6;
  double worst_zero = 0.0, worst_gap = 0.0, min_gap = 1e300;
  for (int t = 0; t < 20; ++t) {
    const int m1 = 2 + t % 2, m2 = 2 + (t / 2) % 2;
    const AdditivityResult r =
        additivity_check(sample(111, std::uint64_t(2 * t), m1, 2, m1),
                         sample(111, std::uint64_t(2 * t + 1), m2, 2, m2));
    worst_zero = std::max({worst_zero, r.s1, r.s2, r.s12});
    worst_gap = std::max(worst_gap, std::abs(r.gap));
    min_gap = std::min(min_gap, r.gap);
  }
  const Channel d = channels::depolarizing_qubit();
  for (const AdditivityResult& r :
       {additivity_check(d, d), additivity_check(d, sample(112, 0, 3, 2, 3)),
        additivity_check(sample(112, 1, 2, 2, 3), d),
        additivity_check(d, sample(112, 2, 2, 2, 4))})
    min_gap = std::min(min_gap, r.gap);
  return {dep_ok && worst_zero <= 1e-6 && worst_gap <= 1e-6 && min_gap >= -1e-6,
          fmt("depolarizing S_min - ln 2 = %.3g; max zero-case entropy %.3g, "
              "max |gap| %.3g over 20 pairs; min gap %.3g incl. depolarizing "
              "(limits 1e-6)",
              dep - std::log(2.0), worst_zero, worst_gap, min_gap)};
}

// 12. Determinism of CLI reports.
Outcome determinism(Clock::time_point suite_start) {
  const std::string split_prefix =
      (std::filesystem::temp_directory_path() / "qchan_acceptance_split").string();
  const std::vector<std::vector<std::string>> commands{
      {"analyze", fixture("amplitude_damping")},
      {"analyze", fixture("depolarizing")},
      {"classify22", fixture("measurement")},
      {"classify32", fixture("qutrit_case1_nonextreme"), "--seed", "12"},
      {"split", fixture("measurement"), "--prefix", split_prefix},
      {"entropy", fixture("depolarizing"), "--seed", "12"},
      {"additivity", fixture("amplitude_damping"), fixture("depolarizing")},
      {"generate", "--m", "3", "--n", "2", "--k", "3", "--seed", "12"},
      {"experiment", "--m", "2", "--n", "2", "--k", "2", "--samples", "200",
       "--seed", "12", "--json"},
  };
  int identical = 0;
  for (const auto& args : commands) {
    std::ostringstream a, b, err;
    const int ca = cli::run(args, a, err);
    const int cb = cli::run(args, b, err);
    if (ca == 0 && cb == 0 && a.str() == b.str() && !a.str().empty()) ++identical;
  }
  const ExperimentResult e1 =
      extreme_fraction_experiment(SamplerConfig{12, 3, 2, 3, 100}, {}, 1);
  const ExperimentResult e4 =
      extreme_fraction_experiment(SamplerConfig{12, 3, 2, 3, 100}, {}, 4);
  const bool threads_ok = e1.extreme == e4.extreme && e1.flagged == e4.flagged;
  const double secs = seconds_since(suite_start);
  return {identical == int(commands.size()) && threads_ok && secs < 600.0,
          fmt("%d/%zu reports byte-identical across runs; thread-count "
              "independent=%s; acceptance wall time %.1f s (limit 600 s)",
              identical, commands.size(), threads_ok ? "yes" : "no", secs)};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  report(1, "Choi-Kraus round trip", round_trip);
  report(2, "criteria equivalence", equivalence);
  report(3, "rank bound splits", rank_bound);
  report(4, "minimal-rank extremality",
         [] { return fraction(3, 2, 2, 500, 1.0, 104); });
  report(5, "genericity", [] {
    const Outcome a = fraction(2, 2, 2, 1000, 0.99, 105);
    const Outcome b = fraction(3, 2, 3, 1000, 0.99, 205);
    return Outcome{a.pass && b.pass, a.detail + "; " + b.detail};
  });
  ImageCorpus corpus;
  report(6, "pure-to-pure witnesses", [&] {
    corpus = image_corpus();
    return Outcome{corpus.failures == 0,
                   fmt("%d/200 failures, max sigma2 %.3g (limit 1e-7), max "
                       "purity defect %.3g (limit 1e-6)",
                       corpus.failures, corpus.worst_sigma, corpus.worst_defect)};
  });
  report(7, "output rank identities", [&] {
    return Outcome{corpus.r_mismatch == 0 && corpus.rank_disagreements == 0,
                   fmt("r != m in %d/200; %d rank disagreements away from "
                       "threshold over 10000 inputs (%d near threshold)",
                       corpus.r_mismatch, corpus.rank_disagreements, corpus.near)};
  });
  report(8, "qubit classification", qubit_classification);
  report(9, "non-unital qubit extremality", non_unital);
  report(10, "qutrit-to-qubit algorithm", qutrit);
  report(11, "minimum output entropy", entropy);
  report(12, "determinism", [&] { return determinism(start); });
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
