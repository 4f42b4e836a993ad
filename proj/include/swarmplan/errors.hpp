#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmplan {

using NodeId = std::int64_t;

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Graph contains a directed cycle; carries the node ids of one cycle.
class CycleDetected : public Error {
public:
    explicit CycleDetected(std::vector<NodeId> cycle);
    const std::vector<NodeId>& cycle() const { return cycle_; }

private:
    std::vector<NodeId> cycle_;
};

/// An edge references a node id that is not part of the graph.
class DanglingEdge : public Error {
public:
    using Error::Error;
};

/// Input document could not be parsed; message carries line/field context.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally parseable input violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Block budget k outside [1, n].
class InvalidBudget : public Error {
public:
    using Error::Error;
};

/// Instance exceeds a configured exhaustive-search limit.
class TooLarge : public Error {
public:
    using Error::Error;
};

/// Chromosome/vector lengths disagree.
class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// Network snapshot is not connected; message lists the components.
class DisconnectedNetwork : public Error {
public:
    explicit DisconnectedNetwork(std::vector<std::vector<NodeId>> components);
    const std::vector<std::vector<NodeId>>& components() const { return components_; }

private:
    std::vector<std::vector<NodeId>> components_;
};

/// A simplex appears before one of its faces in a filtration.
class InvalidFiltration : public Error {
public:
    using Error::Error;
};

/// Diagram exceeds the exact bottleneck-matching size limit.
class TooManyPoints : public Error {
public:
    using Error::Error;
};

/// Diagrams disagree on the number of infinite bars.
class InfiniteBarMismatch : public Error {
public:
    using Error::Error;
};

/// Schema library has no entries.
class EmptyLibrary : public Error {
public:
    using Error::Error;
};

/// Boundary of a 0-simplex requested.
class ZeroDimensional : public Error {
public:
    using Error::Error;
};

/// Scalar argument outside its documented range.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Candidate pool is empty or entirely infeasible.
class NoCandidates : public Error {
public:
    using Error::Error;
};

/// Fewer viable nodes than requested shards/replacements.
class InsufficientNodes : public Error {
public:
    using Error::Error;
};

/// Roulette selection over a population whose fitness mass is zero.
class AllZeroFitness : public Error {
public:
    using Error::Error;
};

/// Partition block count does not match swarm length.
class MismatchedCounts : public Error {
public:
    using Error::Error;
};

} // namespace swarmplan
