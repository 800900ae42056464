#include "reachcount/property.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reachcount/errors.hpp"

namespace reachcount {

using nlohmann::json;

bool Atom::holds(std::span<const double> y) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) acc += coeffs[i] * y[i];
    return op == Comparison::Ge ? acc >= bias : acc <= bias;
}

bool SafetyProperty::holds(std::span<const double> y) const {
    for (const auto& clause : clauses) {
        bool any = false;
        for (const auto& atom : clause) {
            if (atom.holds(y)) {
                any = true;
                break;
            }
        }
        if (!any) return false;
    }
    return true;
}

std::size_t SafetyProperty::output_size() const {
    return clauses.empty() || clauses.front().empty() ? 0 : clauses.front().front().coeffs.size();
}

void SafetyProperty::check_dimensions(std::size_t in, std::size_t out) const {
    if (precondition.size() != in) {
        throw DimensionMismatch("property precondition has " + std::to_string(precondition.size()) +
                                " dimensions, network expects " + std::to_string(in));
    }
    for (const auto& clause : clauses) {
        for (const auto& atom : clause) {
            if (atom.coeffs.size() != out) {
                throw DimensionMismatch("property atom has " + std::to_string(atom.coeffs.size()) +
                                        " coefficients, network has " + std::to_string(out) + " outputs");
            }
        }
    }
}

SafetyProperty SafetyProperty::restricted_to(const Box& region) const {
    return SafetyProperty{region, clauses};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Safe: return "SAFE";
        case Verdict::Violating: return "VIOLATING";
        case Verdict::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

namespace {

Atom difference_ge(std::size_t plus, std::size_t minus, std::size_t n) {
    Atom a;
    a.coeffs.assign(n, 0.0);
    a.coeffs[plus] = 1.0;
    a.coeffs[minus] = -1.0;
    a.bias = 0.0;
    a.op = Comparison::Ge;
    return a;
}

}  // namespace

std::vector<Clause> desugar_argmax(ArgmaxKind kind, std::size_t index, std::size_t n_outputs) {
    if (n_outputs < 2) throw IndexOutOfRange("argmax needs at least two outputs");
    if (index >= n_outputs) {
        throw IndexOutOfRange("argmax index " + std::to_string(index) + " out of range for " +
                              std::to_string(n_outputs) + " outputs");
    }
    std::vector<Clause> clauses;
    if (kind == ArgmaxKind::IsNotMax) {
        Clause c;
        for (std::size_t j = 0; j < n_outputs; ++j) {
            if (j != index) c.push_back(difference_ge(j, index, n_outputs));
        }
        clauses.push_back(std::move(c));
    } else {
        for (std::size_t j = 0; j < n_outputs; ++j) {
            if (j != index) clauses.push_back({difference_ge(index, j, n_outputs)});
        }
    }
    return clauses;
}

SafetyProperty property_from_json_text(const std::string& text, std::optional<PropertyShape> shape) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw MalformedProperty(std::string("property is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw MalformedProperty("property document must be a JSON object");

    SafetyProperty prop;
    try {
        const auto& input = doc.at("input");
        if (!input.is_array() || input.empty()) throw MalformedProperty("'input' must be a non-empty array");
        std::vector<Interval> dims;
        for (const auto& d : input) {
            if (!d.is_array() || d.size() != 2) throw MalformedProperty("each input range must be [lo, hi]");
            try {
                dims.emplace_back(d[0].get<double>(), d[1].get<double>());
            } catch (const InvalidBounds& e) {
                throw MalformedProperty(std::string("bad input range: ") + e.what());
            }
        }
        prop.precondition = Box(std::move(dims));

        if (doc.contains("clauses")) {
            const auto& clauses = doc["clauses"];
            if (!clauses.is_array()) throw MalformedProperty("'clauses' must be an array");
            for (const auto& jc : clauses) {
                if (!jc.is_array() || jc.empty()) throw MalformedProperty("each clause must be a non-empty array");
                Clause clause;
                for (const auto& ja : jc) {
                    Atom atom;
                    atom.coeffs = ja.at("coeffs").get<std::vector<double>>();
                    atom.bias = ja.at("bias").get<double>();
                    const auto op = ja.at("op").get<std::string>();
                    if (op == "ge") {
                        atom.op = Comparison::Ge;
                    } else if (op == "le") {
                        atom.op = Comparison::Le;
                    } else {
                        throw MalformedProperty("atom op must be 'le' or 'ge', got '" + op + "'");
                    }
                    if (atom.coeffs.empty()) throw MalformedProperty("atom needs at least one coefficient");
                    clause.push_back(std::move(atom));
                }
                prop.clauses.push_back(std::move(clause));
            }
        }

        if (doc.contains("argmax")) {
            const auto& am = doc["argmax"];
            const auto kind_name = am.at("kind").get<std::string>();
            ArgmaxKind kind;
            if (kind_name == "is_not_max") {
                kind = ArgmaxKind::IsNotMax;
            } else if (kind_name == "is_max") {
                kind = ArgmaxKind::IsMax;
            } else {
                throw MalformedProperty("argmax kind must be 'is_not_max' or 'is_max'");
            }
            const auto index = am.at("index").get<long long>();
            if (index < 0) throw IndexOutOfRange("argmax index must be non-negative");
            std::size_t n = 0;
            if (shape) {
                n = shape->output_size;
            } else if (doc.contains("outputs")) {
                n = doc["outputs"].get<std::size_t>();
            } else if (!prop.clauses.empty()) {
                n = prop.output_size();
            } else {
                throw MalformedProperty("argmax needs the output count ('outputs' field or a model)");
            }
            auto extra = desugar_argmax(kind, static_cast<std::size_t>(index), n);
            prop.clauses.insert(prop.clauses.end(), extra.begin(), extra.end());
        }
    } catch (const json::exception& e) {
        throw MalformedProperty(std::string("property schema violation: ") + e.what());
    }

    if (prop.clauses.empty()) throw MalformedProperty("property has no postcondition clauses");
    const std::size_t out = prop.output_size();
    for (const auto& clause : prop.clauses) {
        for (const auto& atom : clause) {
            if (atom.coeffs.size() != out) throw DimensionMismatch("atoms disagree on the number of outputs");
        }
    }
    if (shape) prop.check_dimensions(shape->input_size, shape->output_size);
    return prop;
}

SafetyProperty parse_property(const std::filesystem::path& path, std::optional<PropertyShape> shape) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedProperty("cannot open property file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return property_from_json_text(ss.str(), shape);
}

std::string property_to_json_text(const SafetyProperty& prop) {
    json doc;
    json input = json::array();
    for (const auto& d : prop.precondition.dims()) input.push_back({d.lo, d.hi});
    doc["input"] = std::move(input);
    json clauses = json::array();
    for (const auto& clause : prop.clauses) {
        json jc = json::array();
        for (const auto& a : clause) {
            jc.push_back({{"coeffs", a.coeffs}, {"bias", a.bias}, {"op", a.op == Comparison::Ge ? "ge" : "le"}});
        }
        clauses.push_back(std::move(jc));
    }
    doc["clauses"] = std::move(clauses);
    return doc.dump();
}

void save_property(const SafetyProperty& prop, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << property_to_json_text(prop) << '\n';
}

Interval atom_range(const Atom& atom, const ReachSet& reach, const Box& box) {
    if (atom.coeffs.size() != reach.outputs.size()) {
        throw DimensionMismatch("atom arity does not match the reachable set");
    }
    Interval concrete = interval_dot(atom.coeffs, reach.outputs, 0.0);
    if (!reach.symbolic) return concrete;

    const auto& sb = *reach.symbolic;
    if (sb.input_size() != box.size()) throw DimensionMismatch("symbolic bounds do not match the box");
    const std::size_t k = sb.input_size();
    std::vector<double> lo_c(k, 0.0);
    std::vector<double> hi_c(k, 0.0);
    double lo_b = 0.0;
    double hi_b = 0.0;
    for (std::size_t j = 0; j < atom.coeffs.size(); ++j) {
        const double c = atom.coeffs[j];
        if (c == 0.0) continue;
        const bool pos = c > 0;
        auto src_lo = pos ? sb.lower_coeffs(j) : sb.upper_coeffs(j);
        auto src_hi = pos ? sb.upper_coeffs(j) : sb.lower_coeffs(j);
        for (std::size_t d = 0; d < k; ++d) {
            lo_c[d] += c * src_lo[d];
            hi_c[d] += c * src_hi[d];
        }
        lo_b += c * (pos ? sb.lower_bias(j) : sb.upper_bias(j));
        hi_b += c * (pos ? sb.upper_bias(j) : sb.lower_bias(j));
    }
    Interval sym;
    sym.lo = interval_dot(lo_c, box, lo_b).lo;
    sym.hi = interval_dot(hi_c, box, hi_b).hi;
    return intersect(sym, concrete).value_or(concrete);
}

namespace {

enum class Certainty { True, False, Undecided };

Certainty decide(const Atom& atom, const Interval& range) {
    if (atom.op == Comparison::Ge) {
        if (range.lo >= atom.bias) return Certainty::True;
        if (range.hi < atom.bias) return Certainty::False;
    } else {
        if (range.hi <= atom.bias) return Certainty::True;
        if (range.lo > atom.bias) return Certainty::False;
    }
    return Certainty::Undecided;
}

}  // namespace

Verdict classify(const ReachSet& reach, const SafetyProperty& prop, const Box& box) {
    bool all_true = true;
    for (const auto& clause : prop.clauses) {
        bool clause_true = false;
        bool clause_false = true;
        for (const auto& atom : clause) {
            const auto c = decide(atom, atom_range(atom, reach, box));
            if (c == Certainty::True) {
                clause_true = true;
                break;
            }
            if (c != Certainty::False) clause_false = false;
        }
        if (clause_true) continue;
        if (clause_false) return Verdict::Violating;
        all_true = false;
    }
    return all_true ? Verdict::Safe : Verdict::Unknown;
}

}  // namespace reachcount
