// Copyright 2026 The heurevo Authors.
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

#include <cmath>
#include <map>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "heurevo/dsl/parser.hpp"
#include "heurevo/dsl/program.hpp"
#include "heurevo/tasks/jssp.hpp"
#include "support/random_ast.hpp"

namespace heurevo::dsl {
namespace {

const FeatureSchema& js() { return jssp::feature_schema(); }

HeuristicProgram P(const std::string& src) { return HeuristicProgram::parse(src, js()); }

EpisodeState state_with(const std::vector<std::pair<int, double>>& proc_times) {
  EpisodeState s;
  s.task = TaskKind::kJssp;
  for (auto [id, pt] : proc_times) {
    FeatureVector f(jssp::kNumFeatures, 1.0);
    f[jssp::kProcTime] = pt;
    s.candidates.push_back({ActionId{id}, f});
  }
  return s;
}

TEST(DslParse, NegatedProcTimeIsSpt) {
  auto p = P("-proc_time");
  EXPECT_DOUBLE_EQ(p.evaluate(std::map<std::string, double>{{"proc_time", 7.0}}), -7.0);
  EXPECT_EQ(to_int(select_action(p, state_with({{0, 9}, {1, 2}, {2, 5}}))), 1);
}

TEST(DslParse, DivisionByZeroLiteralParses) {
  auto p = P("remaining_work / 0");
  EXPECT_EQ(p.evaluate(std::map<std::string, double>{{"remaining_work", 5.0}}), 0.0);
}

TEST(DslParse, NestedPowerExpression) {
  auto p = P("-flow_due / pow(remaining_work, 1.16 - 0.18*progress)");
  const double fd = 40, rw = 25, pr = 0.5;
  const double expect = -fd / std::pow(rw, 1.16 - 0.18 * pr);
  EXPECT_NEAR(p.evaluate(std::map<std::string, double>{
                  {"flow_due", fd}, {"remaining_work", rw}, {"job_progress", pr}}),
              expect, 1e-12);
}

TEST(DslParse, ErrorsCarryPosition) {
  try {
    P("proc_time +\n  bogus_feature");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::kUnknownFeature);
    EXPECT_EQ(e.name(), "bogus_feature");
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
  for (const char* bad : {"", "proc_time +", "(proc_time", "min(proc_time)", "1 < 2 < 3",
                          "proc_time proc_time", "foo(1)", "3 $ 4"}) {
    try {
      P(bad);
      ADD_FAILURE() << bad;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.kind(), ParseErrorKind::kSyntax) << bad;
    }
  }
}

TEST(DslParse, ResourceLimits) {
  std::string deep = "proc_time";
  for (int i = 0; i < 63; ++i) deep = "abs(" + deep + ")";
  EXPECT_EQ(P(deep).ast()->depth(), 64u);
  try {
    P("abs(" + deep + ")");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::kResourceLimit);
  }
  std::string wide = "proc_time";
  for (int i = 0; i < 1100; ++i) wide = "max(" + wide + ", 1)";
  EXPECT_THROW(P(wide), ParseError);
  // 1025 leaves joined left-deep would exceed the depth; a balanced sum of
  // 1025 leaves has 2049 nodes.
  std::vector<std::string> level(1025, "proc_time");
  while (level.size() > 1) {
    std::vector<std::string> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back("(" + level[i] + " + " + level[i + 1] + ")");
    if (level.size() % 2) next.push_back(level.back());
    level = next;
  }
  try {
    P(level[0]);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseErrorKind::kResourceLimit);
  }
}

TEST(DslEval, DegenerateArithmetic) {
  const std::map<std::string, double> none;
  EXPECT_EQ(P("safediv(1, 0)").evaluate(none), 0.0);
  EXPECT_EQ(P("1 / 1e-13").evaluate(none), 0.0);
  // ln(1e-12) = -12 ln 10
  EXPECT_NEAR(P("log(0)").evaluate(none), -27.631021115928547, 1e-12);
  EXPECT_NEAR(P("log(0)").evaluate(none), -12.0 * std::log(10.0), 1e-12);
  EXPECT_EQ(P("sqrt(-4)").evaluate(none), 0.0);
  EXPECT_EQ(P("pow(-2, 0.5)").evaluate(none), kNegInf);
  EXPECT_EQ(P("exp(1000)").evaluate(none), kNegInf);
  EXPECT_EQ(P("if(exp(1000), 1, 2)").evaluate(none), kNegInf);
  EXPECT_EQ(P("if(0, 1, 2)").evaluate(none), 2.0);
  EXPECT_EQ(P("clamp(5, 0, 3)").evaluate(none), 3.0);
  EXPECT_EQ(P("(2 < 3) + (3 <= 3) + (4 > 5) + (1 >= 2) + (2 == 2)").evaluate(none), 3.0);
}

TEST(DslEval, MissingFeatureThrows) {
  auto p = P("proc_time + flow_due");
  EXPECT_THROW(p.evaluate(std::map<std::string, double>{{"proc_time", 1}}), MissingFeature);
  std::vector<double> short_vec(2, 0.0);
  EXPECT_THROW(p.evaluate(short_vec), MissingFeature);
}

TEST(DslSelect, TieBreaksAndSingleton) {
  auto p = P("proc_time");
  EXPECT_EQ(to_int(select_action(p, state_with({{0, 3}, {1, 3}, {2, 1}}))), 0);
  EXPECT_EQ(to_int(select_action(p, state_with({{5, 3}}))), 5);
  auto all_inf = P("exp(proc_time * 1000)");
  EXPECT_EQ(to_int(select_action(all_inf, state_with({{3, 5}, {1, 7}, {2, 9}}))), 1);
  EXPECT_THROW(select_action(p, EpisodeState{}), EmptyActionSet);
}

TEST(DslPrint, CanonicalFormAndIds) {
  EXPECT_EQ(P("proc_time+flow_due").canonical(), P("(proc_time + flow_due)").canonical());
  EXPECT_EQ(P("proc_time+flow_due").id(), P("proc_time + flow_due").id());
  EXPECT_NE(P("0.5 * proc_time").id(), P("0.50001 * proc_time").id());
}

TEST(DslPrint, MinimalParentheses) {
  EXPECT_EQ(P("(proc_time - flow_due) - (job_id - op_index)").canonical(),
            "proc_time - flow_due - (job_id - op_index)");
  EXPECT_EQ(P("-(proc_time * 2)").canonical(), "-(proc_time * 2)");
  EXPECT_EQ(P("- 3 * proc_time").canonical(), "(-3) * proc_time");
  EXPECT_EQ(P("(proc_time < 2) == 1").canonical(), "(proc_time < 2) == 1");
  EXPECT_EQ(P("progress").canonical(), "job_progress");
}

TEST(DslProperty, RoundTripIsFixedPoint) {
  testing::AstGenerator gen(js(), 12345);
  for (int i = 0; i < 3000; ++i) {
    auto ast = gen(1 + i % 8);
    const std::string text = canonical_print(*ast);
    auto again = parse_expression(text, js());
    ASSERT_TRUE(structurally_equal(*ast, *again)) << text;
    EXPECT_EQ(canonical_print(*again), text);
  }
}

TEST(DslProperty, EvaluationIsTotal) {
  testing::AstGenerator gen(js(), 99);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 3000; ++i) {
    auto prog = HeuristicProgram::from_ast(gen(1 + i % 9), js());
    for (int k = 0; k < 4; ++k) {
      std::vector<double> f(js().size());
      for (auto& x : f) x = (k % 2) ? u(rng) : std::round(u(rng)) * 1e-6;
      const double v = prog.evaluate(f);
      ASSERT_FALSE(std::isnan(v)) << prog.canonical();
      ASSERT_TRUE(std::isfinite(v) || v == kNegInf) << prog.canonical();
    }
  }
}

TEST(DslProperty, ArgmaxAffineInvariance) {
  testing::AstGenerator gen(js(), 5);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0, 50);
  for (int i = 0; i < 300; ++i) {
    auto base = HeuristicProgram::from_ast(gen(4), js());
    const double a = 1 + (i % 7), b = -3.0 + i % 5;
    auto wrapped = P(std::to_string(a) + " * (" + base.canonical() + ") + " + std::to_string(b));
    EpisodeState s;
    for (int c = 0; c < 6; ++c) {
      FeatureVector f(js().size());
      for (auto& x : f) x = std::round(u(rng));
      s.candidates.push_back({ActionId{c}, f});
    }
    // Non-finite or precision-collapsed scores can legitimately break
    // invariance; only compare when the base scores are well separated.
    std::vector<double> scores;
    for (const auto& c : s.candidates) scores.push_back(base.evaluate(c.features));
    auto sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    bool separated = std::isfinite(sorted.back()) && std::abs(sorted.back()) < 1e12;
    if (sorted.size() > 1 && separated) {
      const double top = sorted.back(), second = sorted[sorted.size() - 2];
      separated = top == second ? true : (top - second) > 1e-9 * (1 + std::abs(top));
    }
    if (!separated) continue;
    EXPECT_EQ(select_action(base, s), select_action(wrapped, s)) << base.canonical();
  }
}

TEST(DslProperty, RepeatedSelectionIsBitExact) {
  auto p = P("-flow_due / pow(remaining_work, 1.16 - 0.18*progress) + log(proc_time)");
  EpisodeState s;
  std::mt19937 rng(3);
  for (int c = 0; c < 20; ++c) {
    FeatureVector f(js().size());
    for (auto& x : f) x = std::uniform_real_distribution<double>(0.1, 99)(rng);
    s.candidates.push_back({ActionId{c}, f});
  }
  const auto first = select_action(p, s);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(select_action(p, s), first);
}

TEST(DslProgramFile, RoundTrip) {
  auto p = P("-1 * proc_time").with_meta({"Shortest operation first.", {}, RevisionMode::kSeed});
  const std::string text = format_program_file(p);
  EXPECT_EQ(text, "# desc: Shortest operation first.\n(-1) * proc_time\n");
  auto q = parse_program_file(text, js());
  EXPECT_EQ(q.id(), p.id());
  EXPECT_EQ(q.description(), p.description());
  EXPECT_EQ(parse_program_file("-proc_time\n", js()).description(), "");
}

}  // namespace
}  // namespace heurevo::dsl
