/*
 * Copyright 2026 The cfmimo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CFMIMO_COMMON_HPP
#define CFMIMO_COMMON_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace cfmimo {

using Matrix = Eigen::MatrixXd;
using CMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Point = Eigen::Vector2d;

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid scenario or operation parameters.
struct ConfigError : Error {
  using Error::Error;
};

/// Rank-deficient Gram matrix encountered while building a precoder.
struct SingularMatrixError : Error {
  using Error::Error;
};

/// Monte-Carlo estimation or solver failure (distinct from infeasibility).
struct SolverError : Error {
  using Error::Error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

}  // namespace cfmimo

#endif  // CFMIMO_COMMON_HPP
