#include "dtam/config.hpp"

#include <stdexcept>

namespace dtam {

std::string to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::dtam: return "dtam";
    case Algorithm::pgrotp: return "pgrotp";
    case Algorithm::omp: return "omp";
    case Algorithm::sp: return "sp";
    case Algorithm::stomp: return "stomp";
  }
  return "?";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "dtam") return Algorithm::dtam;
  if (name == "pgrotp") return Algorithm::pgrotp;
  if (name == "omp") return Algorithm::omp;
  if (name == "sp") return Algorithm::sp;
  if (name == "stomp") return Algorithm::stomp;
  throw std::invalid_argument("unknown algorithm: " + name);
}

int algorithm_id(Algorithm alg) {
  switch (alg) {
    case Algorithm::dtam: return 1;
    case Algorithm::pgrotp: return 2;
    case Algorithm::omp: return 3;
    case Algorithm::sp: return 4;
    case Algorithm::stomp: return 5;
  }
  return 0;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::residual_tol: return "residual_tol";
    case StopReason::relative_change_tol: return "relative_change_tol";
    case StopReason::max_iters: return "max_iters";
    case StopReason::zero_direction: return "zero_direction";
  }
  return "?";
}

void AlgoConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("AlgoConfig: gamma must lie in (0,1]");
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw std::invalid_argument("AlgoConfig: beta must lie in [0,1)");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("AlgoConfig: max_iters must be positive");
  }
  if (residual_tol && *residual_tol < 0.0) {
    throw std::invalid_argument("AlgoConfig: residual_tol must be nonnegative");
  }
  if (rel_change_tol < 0.0) {
    throw std::invalid_argument("AlgoConfig: rel_change_tol must be nonnegative");
  }
  if (qbar && *qbar < 1) {
    throw std::invalid_argument("AlgoConfig: qbar must be positive");
  }
  if (!(stomp_threshold > 0.0)) {
    throw std::invalid_argument("AlgoConfig: stomp_threshold must be positive");
  }
}

AlgoConfig AlgoConfig::defaults_for(Algorithm alg) {
  AlgoConfig cfg;
  switch (alg) {
    case Algorithm::dtam:
    case Algorithm::pgrotp:
    case Algorithm::omp:
      cfg.max_iters = 50;
      break;
    case Algorithm::sp:
    case Algorithm::stomp:
      cfg.max_iters = 150;
      break;
  }
  return cfg;
}

}  // namespace dtam
