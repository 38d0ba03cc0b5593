#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace smlink {

using Eigen::ArrayXd;
using Eigen::ArrayXi;
using ArrayXb = Eigen::Array<bool, Eigen::Dynamic, 1>;

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter values or malformed inputs (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed input file; message carries file and line.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& file, long line, const std::string& what)
      : ValidationError(file + ":" + std::to_string(line) + ": " + what) {}
};

// A resampling bin received no input rows.
class GapError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The transcendental optimality equation has no sign change in the bracket.
class NoRootError : public Error {
 public:
  using Error::Error;
};

// Every sample of an erasure pattern was lost; no reconstruction exists.
class AllErasedError : public Error {
 public:
  using Error::Error;
};

// Physical and network parameters of the reference meter-aggregator link
// and the surrounding Poisson field of interferers. All SI units.
struct LinkParams {
  double lambda_ = 0.25;  // interferer density, 1/m^2
  double alpha = 4.0;     // path-loss exponent, in (2, 6]
  double d = 1.0;         // meter-to-aggregator distance, m
  double w_p = 1.0;       // primary transmit power, W
  double w_s = 1.0;       // secondary transmit power, W
};

// Optimization constraints of Eq. (4): power cap and outage cap.
struct Constraints {
  double w_max = 0.5;     // maximum secondary transmit power, W
  double epsilon = 0.05;  // maximum acceptable outage probability, in (0, 0.25]
};

// A solved (beta, w_s) pair with its success probability and throughput.
struct OperatingPoint {
  double beta = 0.0;        // SIR decoding threshold
  double w_s = 0.0;         // secondary power in use, W
  double p_suc = 0.0;       // success probability, in (0, 1]
  double throughput = 0.0;  // bits/s/Hz
};

// Throw ValidationError naming the violated invariant.
void validate(const LinkParams& p);
void validate(const Constraints& c);

}  // namespace smlink
