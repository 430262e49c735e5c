// tests/unit/test_eval.cpp

// Copyright 2026  The advpost Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "advpost/eval/report.hpp"
#include "advpost/toy/toy_corpus.hpp"
#include "test_util.hpp"

namespace advpost {
namespace {

// Clips whose first sample is the score they should receive.
EvalClip Scored(const std::string& id, double score) {
  return {id, Waveform{{static_cast<float>(score), 0.0f}, 16000}};
}

Scorer Reader(const std::string& name, std::function<double(double)> f = [](double x) { return x; },
              std::set<std::string> fails = {}) {
  return {name, [f, fails](const Waveform& w) -> double {
            // Scorers cannot see ids; failing clips are marked by value.
            for (const auto& v : fails) {
              if (std::abs(w.samples[0] - std::stod(v)) < 1e-6) throw std::runtime_error("boom");
            }
            return f(w.samples[0]);
          }};
}

std::vector<EvalClip> Genuines(int n) {
  std::vector<EvalClip> g;
  for (int i = 0; i < n; ++i) g.push_back(Scored("g" + std::to_string(i), 0.5 + 0.001 * i));
  return g;
}

std::vector<EvalClip> Fakes(int fooled, int total) {
  std::vector<EvalClip> f;
  for (int i = 0; i < total; ++i) {
    f.push_back(Scored("f" + std::to_string(i), i < fooled ? 0.9 - 0.001 * i : 0.1 + 0.001 * i));
  }
  return f;
}

TEST(Dsr, AllFooledIsOne) {
  const auto r = ComputeDsr({Reader("d")}, Fakes(100, 100), Genuines(50));
  EXPECT_EQ(r.W, 100);
  EXPECT_EQ(r.A, 100);
  EXPECT_EQ(r.N, 1);
  EXPECT_EQ(r.dsr, 1.0);
}

TEST(Dsr, NoneFooledIsZero) {
  const auto r = ComputeDsr({Reader("d")}, Fakes(0, 100), Genuines(50));
  EXPECT_EQ(r.W, 0);
  EXPECT_EQ(r.dsr, 0.0);
  EXPECT_EQ(r.detector_eers[0], 0.0);
}

TEST(Dsr, FortySevenOfHundred) {
  const auto r = ComputeDsr({Reader("d")}, Fakes(47, 100), Genuines(50));
  EXPECT_EQ(r.W, 47);
  EXPECT_EQ(r.A, 100);
  EXPECT_EQ(r.dsr, 0.47);
  EXPECT_EQ(RecountDsr(r.table, r.N), r.dsr);
}

TEST(Dsr, TwoDetectorsHalfFooled) {
  // The first detector ranks everything backwards, so all fakes pass it.
  const auto r2 =
      ComputeDsr({Reader("all", [](double x) { return -x; }), Reader("none")}, Fakes(0, 100), Genuines(50));
  EXPECT_EQ(r2.W, 100);
  EXPECT_EQ(r2.A, 100);
  EXPECT_EQ(r2.dsr, 0.5);
}

TEST(Dsr, InvariantUnderIncreasingTransform) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0, 1);
  std::vector<EvalClip> f, g;
  for (int i = 0; i < 80; ++i) f.push_back(Scored("f" + std::to_string(i), 0.3 * n(rng)));
  for (int i = 0; i < 60; ++i) g.push_back(Scored("g" + std::to_string(i), 0.5 + 0.3 * n(rng)));
  const auto a = ComputeDsr({Reader("raw")}, f, g);
  const auto b = ComputeDsr({Reader("exp", [](double x) { return std::exp(3 * x) - 7; })}, f, g);
  EXPECT_EQ(a.W, b.W);
  EXPECT_EQ(a.dsr, b.dsr);
  EXPECT_GT(a.W, 0);
  for (std::size_t i = 0; i < a.table.size(); ++i) EXPECT_EQ(a.table[i].wrong, b.table[i].wrong);
}

TEST(Dsr, ScoringFailuresAreExcluded) {
  auto fakes = Fakes(47, 100);
  auto gen = Genuines(50);
  // Fake f3 (0.897) fails on the second detector only; genuine g0 (0.5) fails on the first.
  const auto r = ComputeDsr({Reader("a", [](double x) { return x; }, {"0.5"}),
                             Reader("b", [](double x) { return x; }, {"0.897"})},
                            fakes, gen);
  EXPECT_EQ(r.A, 99);
  EXPECT_EQ(r.W, 2 * 46);
  EXPECT_DOUBLE_EQ(r.dsr, 92.0 / 198.0);
  EXPECT_EQ(RecountDsr(r.table, r.N), r.dsr);
  bool saw_fake = false, saw_genuine = false;
  for (const auto& e : r.excluded) {
    saw_fake |= e.role == ClipRole::kFake && e.id == "f3";
    saw_genuine |= e.role == ClipRole::kGenuine && e.id == "g0" && e.detector == "a";
  }
  EXPECT_TRUE(saw_fake);
  EXPECT_TRUE(saw_genuine);
  for (const auto& row : r.table) EXPECT_NE(row.id, "f3");
}

TEST(Dsr, Errors) {
  EXPECT_ADVPOST_ERROR(ComputeDsr({Reader("d")}, {}, Genuines(3)), ErrorCode::kEmptyInput);
  EXPECT_ADVPOST_ERROR(ComputeDsr({Reader("d")}, Fakes(1, 3), {}), ErrorCode::kEmptyInput);
  EXPECT_ADVPOST_ERROR(ComputeDsr({}, Fakes(1, 3), Genuines(3)), ErrorCode::kEmptyInput);
}

TEST(Dsr, CsvAndJson) {
  const auto r = ComputeDsr({Reader("d")}, Fakes(2, 4), Genuines(3));
  const auto csv = ScoreTableCsv(r.table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,detector,role,score,threshold,wrong");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 7);
  EvalReport rep;
  rep.dsr = r;
  const auto j = ToJson(rep);
  EXPECT_EQ(j["schema_version"], kEvalReportSchemaVersion);
  EXPECT_EQ(j["W"], 2);
  EXPECT_EQ(j["A"], 4);
}

TEST(EerDelta, IdentitySymmetryAndPerfect) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  std::vector<EvalClip> g, before, after;
  for (int i = 0; i < 40; ++i) {
    g.push_back(Scored("g", 1 + n(rng)));
    before.push_back(Scored("b", n(rng)));
    after.push_back(Scored("a", 0.8 + n(rng)));
  }
  const auto s = Reader("d");
  const auto same = EerDelta(s, g, before, before);
  EXPECT_EQ(same.before.eer, same.after.eer);
  const auto fwd = EerDelta(s, g, before, after);
  const auto rev = EerDelta(s, g, after, before);
  EXPECT_EQ(fwd.before.eer, rev.after.eer);
  EXPECT_EQ(fwd.after.eer, rev.before.eer);
  EXPECT_GT(fwd.after.eer, fwd.before.eer);
  const auto perfect = EerDelta(s, Genuines(5), Fakes(0, 5), Fakes(0, 6));
  EXPECT_EQ(perfect.before.eer, 0.0);
  EXPECT_EQ(perfect.after.eer, 0.0);
}

TEST(SilenceSpeechMt, ZeroResidualAndConstructedCounterCase) {
  Waveform s{std::vector<float>(16000, 0.0f), 16000};
  for (int i = 8000; i < 16000; ++i) s.samples[i] = 0.3f * std::sin(0.05f * i);
  const Waveform zero{std::vector<float>(16000, 0.0f), 16000};
  const auto z = SilenceSpeechMt(s, zero);
  ASSERT_TRUE(z.mean_speech && z.mean_silence);
  EXPECT_EQ(*z.mean_speech, 0.0);
  EXPECT_EQ(*z.mean_silence, 0.0);
  EXPECT_EQ(z.speech_samples + z.silence_samples, 16000u);

  Waveform p = zero;
  for (int i = 0; i < 8000; ++i) p.samples[i] = 0.001f;
  const auto c = SilenceSpeechMt(s, p);
  EXPECT_GT(*c.mean_silence, *c.mean_speech);
  EXPECT_NEAR(*c.mean_silence, 0.001 / 0.0011, 1e-4);
}

TEST(SilenceSpeechMt, AbsentClassesAndErrors) {
  const auto loud = testing::RandomWaveform(4000, 6, 0.5);
  const auto m = SilenceSpeechMt(loud, testing::RandomWaveform(4000, 7, 0.01));
  EXPECT_TRUE(m.mean_speech.has_value());
  EXPECT_FALSE(m.mean_silence.has_value());
  const Waveform quiet{std::vector<float>(4000, 0.0f), 16000};
  const auto q = SilenceSpeechMt(quiet, quiet);
  EXPECT_FALSE(q.mean_speech.has_value());
  EXPECT_TRUE(q.mean_silence.has_value());
  EXPECT_ADVPOST_ERROR(SilenceSpeechMt(loud, testing::RandomWaveform(3999, 8)),
                       ErrorCode::kLengthMismatch);
}

TEST(Spectrogram, IdenticalInputsGiveZeroDifference) {
  const auto dir = testing::TempDir("spec");
  const auto w = MakeToyClip(ToyRole::kGenuine, ToyCorpusConfig{}, 3);
  const auto r = SpectrogramDiff(w, w, dir / "same");
  ASSERT_EQ(r.band_mean_abs_db.size(), 8u);
  for (double b : r.band_mean_abs_db) EXPECT_EQ(b, 0.0);
  EXPECT_TRUE(std::filesystem::exists(dir / "same.png"));
  EXPECT_TRUE(std::filesystem::exists(dir / "same.npy"));
  std::ifstream js(dir / "same.json");
  const auto j = nlohmann::json::parse(js);
  for (double b : j.at("band_mean_abs_log_diff_db")) EXPECT_EQ(b, 0.0);
  std::ifstream png(dir / "same.png", std::ios::binary);
  char magic[8];
  png.read(magic, 8);
  EXPECT_EQ(std::string(magic + 1, 3), "PNG");
}

TEST(Spectrogram, WhiteNoiseHurtsHighBandsMore) {
  const auto w = MakeToyClip(ToyRole::kGenuine, ToyCorpusConfig{}, 4);
  auto noisy = w;
  std::mt19937_64 rng(4);
  std::normal_distribution<float> n(0, 1);
  for (float& v : noisy.samples) v += 0.01f * n(rng);
  const auto r = SpectrogramDiff(w, noisy, {});
  EXPECT_LT(r.band_mean_abs_db.front(), r.band_mean_abs_db.back());
  EXPECT_EQ(r.band_edges_hz.front(), 0.0);
  EXPECT_EQ(r.band_edges_hz.back(), 8000.0);
}

TEST(Spectrogram, ShapeAndErrors) {
  const auto w = testing::RandomWaveform(16000, 8);
  const auto s = LogSpectrogram(w);
  EXPECT_EQ(s.size(1), 257);
  EXPECT_GE(s.min().item<double>(), -80.0);
  EXPECT_ADVPOST_ERROR(SpectrogramDiff(w, testing::RandomWaveform(100, 1), {}),
                       ErrorCode::kLengthMismatch);
}

}  // namespace
}  // namespace advpost
