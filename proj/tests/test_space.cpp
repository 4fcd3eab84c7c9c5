// Copyright 2026 The Research Space Authors.
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

#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rspace/parallel.hpp"
#include "rspace/space.hpp"
#include "support.hpp"

using namespace rspace;
using support::presence;

namespace {

// s1 in {f1, f2}, s2 in {f1}, s3 in {f1, f2, f3}.
const oracle::Dense kToy = {{1, 1, 0}, {1, 0, 0}, {1, 1, 1}};

oracle::Binary random_membership(std::mt19937_64& rng, std::size_t ns, std::size_t nf) {
  std::bernoulli_distribution member(0.3);
  oracle::Binary p(ns, std::vector<int>(nf, 0));
  for (auto& row : p)
    for (auto& c : row) c = member(rng);
  return p;
}

oracle::Dense as_presence(const oracle::Binary& p) {
  oracle::Dense x(p.size(), std::vector<double>(p.empty() ? 0 : p[0].size(), 0.0));
  for (std::size_t s = 0; s < p.size(); ++s)
    for (std::size_t f = 0; f < p[s].size(); ++f) x[s][f] = p[s][f] ? 1.0 : 0.0;
  return x;
}

ProximityMatrix phi_of(const oracle::Dense& x) {
  auto p = discretize(presence(x), 0.1);
  return proximity(cooccurrence(p), p);
}

}  // namespace

TEST_CASE("presence_matrix sums shares inside the window") {
  auto fields = support::field_index(2);
  std::vector<FieldedPublication> pubs = {{"a", "f00", 2005, 0.1},
                                          {"b", "f01", 2005, 1.0},
                                          {"b", "f01", 2006, 1.0},
                                          {"c", "f00", 2011, 1.0},
                                          {"a", "zz", 2005, 1.0}};
  auto x = presence_matrix(pubs, fields, {2001, 2011});
  REQUIRE(x.values.n_entities() == 2);
  CHECK(x.values.value(*x.values.find_entity("a"), 0) == 0.1);
  CHECK(x.values.value(*x.values.find_entity("b"), 1) == 2.0);
  CHECK_FALSE(x.values.find_entity("c"));
  CHECK_THROWS_AS(presence_matrix(pubs, fields, {2005, 2005}), std::invalid_argument);
}

TEST_CASE("presence over disjoint windows is additive") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> year(2000, 2009), pow2(0, 4), ent(0, 9), fld(0, 5);
  std::vector<FieldedPublication> pubs;
  for (int i = 0; i < 500; ++i)
    pubs.push_back({support::entity_name(ent(rng)), support::field_name(fld(rng)), year(rng),
                    1.0 / static_cast<double>(1 << pow2(rng)) / static_cast<double>(1 << pow2(rng))});
  auto fields = support::field_index(6);
  auto all = presence_matrix(pubs, fields, {2000, 2010});
  auto a = presence_matrix(pubs, fields, {2000, 2004});
  auto b = presence_matrix(pubs, fields, {2004, 2010});
  for (std::size_t s = 0; s < all.values.n_entities(); ++s) {
    const auto& id = all.values.entity(s);
    for (std::size_t f = 0; f < 6; ++f) {
      double va = a.values.find_entity(id) ? a.values.value(*a.values.find_entity(id), f) : 0.0;
      double vb = b.values.find_entity(id) ? b.values.value(*b.values.find_entity(id), f) : 0.0;
      CHECK(all.values.value(s, f) == va + vb);
    }
  }
}

TEST_CASE("discretize is a strict threshold") {
  auto p = discretize(presence({{0.1, 0.100001, 0.05}}), 0.1);
  REQUIRE(p.members.size() == 1);
  CHECK(p.members[0] == std::vector<std::size_t>{1});
  auto empty = discretize(
      PresenceMatrix{Level::Author, {2000, 2001}, EntityFieldMatrix(support::field_index(3))});
  CHECK(empty.members.empty());
  CHECK_THROWS_AS(discretize(presence({{1.0}}), -0.5), std::invalid_argument);
}

TEST_CASE("cooccurrence on the three-scholar toy") {
  auto m = cooccurrence(discretize(presence(kToy)));
  CHECK(m.at(0, 1) == 2);
  CHECK(m.at(1, 0) == 2);
  CHECK(m.at(2, 2) == 1);
  CHECK(m.at(0, 0) == 3);
  SUBCASE("disjoint single-field scholars") {
    auto d = cooccurrence(discretize(presence({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})));
    for (std::size_t f = 0; f < 3; ++f)
      for (std::size_t g = 0; g < 3; ++g) CHECK(d.at(f, g) == (f == g ? 1 : 0));
  }
  SUBCASE("non-author levels are rejected") {
    CHECK_THROWS_AS(cooccurrence(discretize(presence(kToy, Level::Organization))),
                    std::invalid_argument);
  }
}

TEST_CASE("proximity on the three-scholar toy") {
  auto phi = phi_of(kToy);
  CHECK(phi.kind() == MapKind::CareerPath);
  CHECK(phi.at(0, 1) == 1.0);
  CHECK(phi.at(1, 0) == 2.0 / 3.0);
  CHECK(phi.at(2, 1) == 0.5);
  CHECK_FALSE(phi.is_symmetric());
  for (std::size_t f = 0; f < 3; ++f) CHECK(phi.at(f, f) == 1.0);
  SUBCASE("memberless field has an all-zero column") {
    auto z = phi_of({{1, 1, 0, 0.05}, {1, 0, 0, 0}});
    for (std::size_t f = 0; f < 4; ++f) CHECK(z.at(f, 3) == 0.0);
    CHECK(z.at(3, 3) == 0.0);
  }
}

TEST_CASE("sparse phi matches the dense oracle on random corpora") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> ns(1, 50), nf(1, 10);
  for (unsigned threads : {1u, 3u}) {
    set_thread_count(threads);
    for (int trial = 0; trial < 50; ++trial) {
      const auto s = ns(rng), f = nf(rng);
      auto member = random_membership(rng, s, f);
      auto bp = discretize(presence(as_presence(member)));
      auto m = cooccurrence(bp);
      auto phi = proximity(m, bp);
      auto want_m = oracle::cooccurrence(member, f);
      auto want_phi = oracle::proximity(member, f);
      for (std::size_t a = 0; a < f; ++a)
        for (std::size_t b = 0; b < f; ++b) {
          CHECK(m.at(a, b) == want_m[a][b]);
          CHECK(std::abs(phi.at(a, b) - want_phi[a][b]) <= 1e-12);
          CHECK(phi.at(a, b) >= 0.0);
          CHECK(phi.at(a, b) <= 1.0);
          CHECK(m.at(a, b) == m.at(b, a));
        }
    }
  }
  set_thread_count(0);
}

TEST_CASE("a single-field scholar only touches its own column") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto member = random_membership(rng, 20, 6);
    auto before_x = as_presence(member);
    const std::size_t f = trial % 6;
    auto after_x = before_x;
    after_x.push_back(std::vector<double>(6, 0.0));
    after_x.back()[f] = 1.0;
    auto pb = discretize(presence(before_x));
    auto pa = discretize(presence(after_x));
    auto mb = cooccurrence(pb), ma = cooccurrence(pa);
    auto phib = proximity(mb, pb), phia = proximity(ma, pa);
    for (std::size_t a = 0; a < 6; ++a)
      for (std::size_t b = 0; b < 6; ++b) {
        CHECK(ma.at(a, b) == mb.at(a, b) + (a == f && b == f ? 1 : 0));
        if (b != f) CHECK(phia.at(a, b) == phib.at(a, b));
      }
  }
}

TEST_CASE("symmetrize_max") {
  auto sym = symmetrize_max(phi_of(kToy));
  CHECK(sym.is_symmetric());
  CHECK(sym.at(0, 1) == 1.0);
  CHECK(sym.at(1, 0) == 1.0);
  CHECK(symmetrize_max(sym).values() == sym.values());
  ProximityMatrix zero(support::field_index(3), MapKind::CareerPath);
  CHECK(symmetrize_max(zero).values() == zero.values());
}

TEST_CASE("load_external_map") {
  auto fields = support::field_index(3);
  SUBCASE("edges are stored both ways") {
    std::istringstream in("field_i,field_j,weight\nf00,f01,0.4\n");
    auto r = load_external_map(in, fields);
    CHECK(r.map.kind() == MapKind::External);
    CHECK(r.map.at(0, 1) == 0.4);
    CHECK(r.map.at(1, 0) == 0.4);
    CHECK(r.map.is_symmetric());
  }
  SUBCASE("unknown fields are skipped and reported") {
    std::istringstream in("field_i,field_j,weight\nf00,x9,0.4\nx8,x9,0.1\nf01,f02,0.3\n");
    auto r = load_external_map(in, fields);
    CHECK(r.skipped_edges == 2);
    CHECK(r.unknown_fields == std::vector<std::string>{"x8", "x9"});
    CHECK(r.map.at(2, 1) == 0.3);
  }
  SUBCASE("conflicting duplicates are an error") {
    std::istringstream in("field_i,field_j,weight\nf00,f01,0.4\nf01,f00,0.5\n");
    CHECK_THROWS_AS(load_external_map(in, fields), std::invalid_argument);
  }
  SUBCASE("consistent duplicates are accepted") {
    std::istringstream in("field_i,field_j,weight\nf00,f01,0.4\nf01,f00,0.4\n");
    CHECK_NOTHROW(load_external_map(in, fields));
  }
  SUBCASE("negative weight is an error") {
    std::istringstream in("field_i,field_j,weight\nf00,f01,-0.1\n");
    CHECK_THROWS_AS(load_external_map(in, fields), std::invalid_argument);
  }
}

TEST_CASE("phi csv round trip") {
  std::mt19937_64 rng(9);
  auto member = random_membership(rng, 40, 8);
  auto bp = discretize(presence(as_presence(member)));
  auto phi = proximity(cooccurrence(bp), bp);
  std::ostringstream out;
  write_phi_csv(out, phi);
  CHECK(out.str().rfind("field_from,field_to,phi\n", 0) == 0);
  std::istringstream in(out.str());
  auto back = read_phi_csv(in);
  REQUIRE(back.fields() == phi.fields());
  for (std::size_t f = 0; f < phi.size(); ++f)
    for (std::size_t g = 0; g < phi.size(); ++g)
      CHECK(std::abs(back.at(f, g) - phi.at(f, g)) <= 1e-12);
  std::ostringstream again;
  write_phi_csv(again, back);
  CHECK(again.str() == out.str());
}
