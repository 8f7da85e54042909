// Copyright 2026 The flowmigrate Authors
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

#include <gtest/gtest.h>

#include "flowmigrate/acker.h"
#include "flowmigrate/errors.h"
#include "flowmigrate/suite.h"

namespace flowmigrate {
namespace {

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

TEST(AckerTest, RegisterSetsHashToRoot) {
  Acker acker;
  EXPECT_EQ(acker.RegisterRoot(0x5, SimTime(0)).xor_hash, 0x5u);
}

TEST(AckerTest, DuplicateRoot) {
  Acker acker;
  acker.RegisterRoot(0x5, SimTime(0));
  EXPECT_EQ(CodeOf([&] { acker.RegisterRoot(0x5, SimTime(1)); }),
            ErrorCode::kDuplicateRoot);
}

TEST(AckerTest, AckingRootCompletes) {
  Acker acker;
  acker.RegisterRoot(0x5, SimTime(0));
  EXPECT_EQ(acker.AckEvent(0x5, 0x5), 0u);
  EXPECT_TRUE(acker.Find(0x5)->completed);
}

TEST(AckerTest, XorAlgebra) {
  Acker acker;
  acker.RegisterRoot(0x5, SimTime(0));
  EXPECT_EQ(acker.AnchorEmit(0x5, 0x3), 0x6u);
  EXPECT_EQ(acker.AckEvent(0x5, 0x5), 0x3u);
  EXPECT_FALSE(acker.Find(0x5)->completed);
  EXPECT_EQ(acker.AckEvent(0x5, 0x3), 0u);
  EXPECT_TRUE(acker.Find(0x5)->completed);
}

TEST(AckerTest, UnknownRoot) {
  Acker acker;
  EXPECT_EQ(CodeOf([&] { acker.AckEvent(0x9, 0x9); }), ErrorCode::kUnknownRoot);
  EXPECT_EQ(CodeOf([&] { acker.AnchorEmit(0x9, 0x1); }), ErrorCode::kUnknownRoot);
}

TEST(AckerTest, RandomTreesMatchBookkeepingOracle) {
  Check c = XorOracleCheck(0x5eed, 300, 64);
  EXPECT_TRUE(c.pass) << c.detail;
  Check other = XorOracleCheck(7, 300, 8);
  EXPECT_TRUE(other.pass) << other.detail;
}

TEST(AckerTest, SweepReplaysIncompleteRoots) {
  Acker acker;
  acker.RegisterRoot(1, SimTime(0));
  acker.RegisterRoot(2, SimTime(0));
  acker.AckEvent(2, 2);
  EXPECT_TRUE(acker.SweepTimeouts(SimTime(29'999), Duration(30'000)).empty());
  auto expired = acker.SweepTimeouts(SimTime(30'000), Duration(30'000));
  ASSERT_EQ(expired, std::vector<RootId>{1});
  const AckerEntry* e = acker.Find(1);
  EXPECT_EQ(e->attempt, 1u);
  EXPECT_EQ(e->xor_hash, 1u);
  EXPECT_EQ(e->register_ts, SimTime(30'000));
}

TEST(AckerTest, ReplayedRootTimesOutAgain) {
  Acker acker;
  acker.RegisterRoot(1, SimTime(0));
  acker.SweepTimeouts(SimTime(30'000), Duration(30'000));
  auto again = acker.SweepTimeouts(SimTime(60'000), Duration(30'000));
  EXPECT_EQ(again, std::vector<RootId>{1});
  EXPECT_EQ(acker.Find(1)->attempt, 2u);
}

TEST(AckerTest, SweepOrderIsRegistrationOrder) {
  Acker acker;
  acker.RegisterRoot(9, SimTime(0));
  acker.RegisterRoot(3, SimTime(0));
  acker.RegisterRoot(5, SimTime(10));
  auto expired = acker.SweepTimeouts(SimTime(100), Duration(50));
  EXPECT_EQ(expired, (std::vector<RootId>{9, 3, 5}));
}

TEST(AckerTest, DiscardForgetsRoot) {
  Acker acker;
  acker.RegisterRoot(4, SimTime(0));
  acker.Discard(4);
  EXPECT_EQ(acker.Find(4), nullptr);
  EXPECT_EQ(acker.size(), 0u);
}

}  // namespace
}  // namespace flowmigrate
