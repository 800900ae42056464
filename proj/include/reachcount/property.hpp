#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reachcount/geometry.hpp"
#include "reachcount/propagation.hpp"

namespace reachcount {

enum class Comparison { Le, Ge };

/// coeffs . y <= bias (Le) or coeffs . y >= bias (Ge), over output nodes.
struct Atom {
    std::vector<double> coeffs;
    double bias = 0.0;
    Comparison op = Comparison::Ge;

    bool holds(std::span<const double> y) const;
    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Disjunction of atoms.
using Clause = std::vector<Atom>;

/// Precondition box P and postcondition Q as a conjunction of clauses.
/// The violation set is always the complement of Q.
struct SafetyProperty {
    Box precondition;
    std::vector<Clause> clauses;

    /// Q at a concrete output point.
    bool holds(std::span<const double> y) const;
    std::size_t input_size() const { return precondition.size(); }
    /// Output arity implied by the atoms.
    std::size_t output_size() const;
    /// Throws DimensionMismatch when the property does not fit the shape.
    void check_dimensions(std::size_t input_size, std::size_t output_size) const;
    /// Same postcondition over another precondition.
    SafetyProperty restricted_to(const Box& region) const;
};

enum class Verdict { Safe, Violating, Unknown };

std::string to_string(Verdict v);

enum class ArgmaxKind { IsNotMax, IsMax };

/// IS_NOT_MAX(i): one clause OR_{j != i} (y_j - y_i >= 0).
/// IS_MAX(i): n-1 clauses (y_i - y_j >= 0).
std::vector<Clause> desugar_argmax(ArgmaxKind kind, std::size_t index, std::size_t n_outputs);

struct PropertyShape {
    std::size_t input_size = 0;
    std::size_t output_size = 0;
};

/// Parses the JSON property document. `shape` is required to desugar an
/// argmax entry when no clause or "outputs" field fixes the output arity.
SafetyProperty parse_property(const std::filesystem::path& path, std::optional<PropertyShape> shape = {});
SafetyProperty property_from_json_text(const std::string& text, std::optional<PropertyShape> shape = {});
std::string property_to_json_text(const SafetyProperty& prop);
void save_property(const SafetyProperty& prop, const std::filesystem::path& path);

/// Bounds on an atom's left-hand side over `box`, combining symbolic
/// output forms (when present) with interval arithmetic on the outputs.
Interval atom_range(const Atom& atom, const ReachSet& reach, const Box& box);

/// SAFE when every clause is certified true, VIOLATING when some clause is
/// certified false, UNKNOWN otherwise.
Verdict classify(const ReachSet& reach, const SafetyProperty& prop, const Box& box);

}  // namespace reachcount
