// Frames and sources of the worked examples, built through the public API.
#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "fusion/algebra.hpp"
#include "fusion/mass.hpp"
#include "fusion/uft.hpp"

namespace fixtures {

using fusion::Bba;
using fusion::Constraint;
using fusion::Frame;
using fusion::FramePtr;

inline Bba bba(const FramePtr& frame, std::initializer_list<std::pair<const char*, double>> masses) {
  Bba b(frame);
  for (const auto& [expr, m] : masses) b.add(fusion::parse_expr(expr, frame), m);
  return b;
}

inline double mass(const Bba& b, const char* expr) { return b.mass(fusion::parse_expr(expr, b.frame_ptr())); }

// Two sources over A, B inside {A, B, C, D}.
struct TwoSources {
  FramePtr free = Frame::build({"A", "B", "C", "D"});
  FramePtr exclusive = Frame::build({"A", "B", "C", "D"}, {Constraint::empty("A&B")});
  Bba s1 = bba(free, {{"A", 0.2}, {"B", 0.5}, {"A|B", 0.3}});
  Bba s2 = bba(free, {{"A", 0.4}, {"B", 0.4}, {"A|B", 0.2}});
  std::vector<Bba> pair() const { return {s1, s2}; }
};

// Five hypotheses; only A&B and B&C may overlap.
struct FiveAtoms {
  FramePtr model = Frame::build({"A", "B", "C", "D", "E"},
                                {Constraint::empty("A&C"), Constraint::empty("A&D"), Constraint::empty("A&E"),
                                 Constraint::empty("B&D"), Constraint::empty("B&E"), Constraint::empty("C&D"),
                                 Constraint::empty("C&E"), Constraint::empty("D&E")});
  FramePtr free = model->free_model();
  Bba m1 = bba(free, {{"A", 0.2}, {"C", 0.3}, {"D", 0.4}, {"E", 0.1}});
  Bba m2 = bba(free, {{"A", 0.5}, {"B", 0.2}, {"C", 0.1}, {"E", 0.2}});
  std::vector<Bba> pair() const { return {m1, m2}; }

  fusion::RelationshipSpec cases() const {
    using K = fusion::RelationshipCase::Kind;
    using fusion::RelationshipCase;
    fusion::RelationshipSpec spec(fusion::World::Closed);
    auto set = [&](const char* cell, RelationshipCase c) { spec.set(fusion::parse_expr(cell, free), c); };
    set("A&B", RelationshipCase::of(K::KeepOnIntersection));
    set("A&C", RelationshipCase::of(K::OptimisticBoth));
    set("A&D", RelationshipCase::of(K::OneRightUnknown));
    set("A&E", RelationshipCase::right(fusion::parse_expr("A", free)));
    set("B&C", RelationshipCase::of(K::KeepOnIntersection));
    set("B&D", RelationshipCase::of(K::OneRightUnknown));
    set("B&E", RelationshipCase::of(K::OptimisticBoth));
    set("C&D", RelationshipCase::of(K::OneRightUnknown));
    set("C&E", RelationshipCase::of(K::OneRightUnknown));
    set("D&E", RelationshipCase::of(K::BothWrong));
    return spec;
  }
};

// Complements in the frame: A&B empty, C inside B, A inside !B.
struct Complement {
  FramePtr model = Frame::build({"A", "B", "C", "D"}, {Constraint::empty("A&B"), Constraint::subset("C", "B"),
                                                       Constraint::subset("A", "!B")});
  FramePtr free = model->free_model();
  Bba m1 = bba(free, {{"A", 0.2}, {"B", 0.3}, {"!B", 0.1}, {"A&C", 0.1}, {"B|C", 0.3}});
  Bba m2 = bba(free, {{"A", 0.4}, {"B", 0.1}, {"!B", 0.2}, {"A&C", 0.2}, {"B|C", 0.1}});
  std::vector<Bba> pair() const { return {m1, m2}; }

  fusion::RelationshipSpec cases() const {
    using K = fusion::RelationshipCase::Kind;
    using fusion::RelationshipCase;
    fusion::RelationshipSpec spec(fusion::World::Closed);
    auto set = [&](const char* cell, RelationshipCase c) { spec.set(fusion::parse_expr(cell, free), c); };
    set("A&C", RelationshipCase::of(K::OneRightUnknown));
    set("A&B", RelationshipCase::of(K::OptimisticBoth));
    set("A&(B|C)", RelationshipCase::of(K::OneRightUnknown));
    set("B&!B", RelationshipCase::right(fusion::parse_expr("B", free)));
    set("!B&A&C", RelationshipCase::of(K::VeryPessimisticClosed));
    set("!B&(B|C)", RelationshipCase::of(K::BothWrong));
    return spec;
  }
};

// Intervals of the real line: only A&B is non-empty.
struct CrossSection {
  FramePtr model = Frame::build({"A", "B", "C"}, {Constraint::empty("A&C"), Constraint::empty("B&C")});
  FramePtr free = model->free_model();
  Bba m1 = bba(free, {{"A", 0.5}, {"B", 0.2}, {"C", 0.3}});
  Bba m2 = bba(free, {{"A", 0.4}, {"B", 0.4}, {"C", 0.2}});
  std::vector<Bba> pair() const { return {m1, m2}; }
};

}  // namespace fixtures
