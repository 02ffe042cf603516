#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expression layer
struct SyntaxError : Error {
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + what),
        offset(offset) {}
  std::size_t offset;
};

struct UnknownIdentifier : Error {
  UnknownIdentifier(std::size_t offset, const std::string& name)
      : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        offset(offset), name(name) {}
  std::size_t offset;
  std::string name;
};

// Jet / tensor layer
struct DomainError : Error {
  using Error::Error;
};

struct VarianceError : Error {
  using Error::Error;
};

struct SingularMetric : Error {
  using Error::Error;
};

struct OrderExhausted : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

// Conformal / quadrature / harness layer
struct UnknownChartKind : Error {
  using Error::Error;
};

struct NodeEvaluationError : Error {
  NodeEvaluationError(std::vector<double> node, const std::string& what)
      : Error("node evaluation failed: " + what), node(std::move(node)) {}
  std::vector<double> node;
};

struct NonFiniteValue : Error {
  using Error::Error;
};

struct NotConformalKilling : Error {
  using Error::Error;
};

struct ConfigError : Error {
  ConfigError(int line, const std::string& what)
      : Error("config line " + std::to_string(line) + ": " + what), line(line) {}
  explicit ConfigError(const std::string& what) : Error(what), line(0) {}
  int line;
};

}  // namespace curvlab
