#pragma once

// Shared scenario fixtures for the test suites.

#include "netsdp/qsim.hpp"
#include "netsdp/scenario.hpp"

namespace fixtures {

// Tripartite line A - B - C, binary inputs and outputs everywhere.
inline netsdp::Scenario binary_line(netsdp::Mode mode) {
  netsdp::Scenario sc;
  sc.parties = {{"A", 2, {2, 2}}, {"B", 2, {2, 2}}, {"C", 2, {2, 2}}};
  sc.structure.sources = {{0, 1}, {1, 2}};
  sc.mode = mode;
  return sc;
}

// Tripartite line for the detection-efficiency experiments: lossy 3-outcome
// measurements at A and C, a single 4-outcome measurement at B.
inline netsdp::Scenario efficiency_line(netsdp::Mode mode) {
  netsdp::Scenario sc;
  sc.parties = {{"A", 2, {3, 3}}, {"B", 1, {4}}, {"C", 2, {3, 3}}};
  sc.structure.sources = {{0, 1}, {1, 2}};
  sc.mode = mode;
  return sc;
}

inline netsdp::Letter obs(int party, int input) {
  return {party, input, netsdp::LetterKind::observable, -1};
}

inline netsdp::Letter proj(int party, int input, int outcome) {
  return {party, input, netsdp::LetterKind::projector, outcome};
}

}  // namespace fixtures
