#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairsplit/numeric.hpp"

namespace fairsplit {

class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class model_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class spec_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Activation { relu, identity };

struct Layer {
    std::vector<std::vector<Rational>> weights;  // rows x cols
    std::vector<Rational> biases;
    Activation activation = Activation::relu;

    std::size_t rows() const { return weights.size(); }
    std::size_t cols() const { return weights.empty() ? 0 : weights.front().size(); }
    // Pre-activation of node `row` over the previous layer's post variables.
    LinExpr affine(std::size_t row, unsigned prev_layer) const;
};

class NetworkModel {
public:
    NetworkModel(std::size_t input_size, std::vector<Layer> layers);

    std::size_t input_size() const { return input_size_; }
    std::size_t output_size() const { return layers_.back().rows(); }
    const std::vector<Layer>& layers() const { return layers_; }
    // Network layer numbering: inputs are layer 0, layers()[i] is layer i + 1.
    std::size_t layer_count() const { return layers_.size(); }
    std::size_t hidden_node_count() const;
    // Position of (layer, index) in a flat enumeration of hidden nodes.
    std::size_t hidden_offset(unsigned layer) const;

private:
    std::size_t input_size_;
    std::vector<Layer> layers_;
    std::vector<std::size_t> hidden_offsets_;
};

NetworkModel parse_model(std::string_view text);
NetworkModel load_model(const std::string& path);

std::vector<Rational> eval_scores(const NetworkModel& m, std::span<const Rational> x);
// Index of the largest output; ties go to the lowest index.
std::size_t eval_concrete(const NetworkModel& m, std::span<const Rational> x);
std::size_t argmax_lowest(std::span<const Rational> scores);

enum class FeatureKind { continuous, categorical };

struct Feature {
    std::string name;
    FeatureKind kind = FeatureKind::continuous;
    Interval range{0, 1};       // continuous only
    unsigned arity = 1;         // categorical only
    bool sensitive = false;
    unsigned first_node = 0;    // first input node occupied
    std::vector<Interval> choices;  // continuous sensitive only

    unsigned width() const { return kind == FeatureKind::categorical ? arity : 1; }
    // Number of value choices when sensitive.
    std::size_t choice_count() const {
        return kind == FeatureKind::categorical ? arity : choices.size();
    }
};

// One value choice per sensitive feature, aligned with sensitive_features().
using SensitiveChoice = std::vector<unsigned>;

class InputSpec {
public:
    explicit InputSpec(std::vector<Feature> features);

    const std::vector<Feature>& features() const { return features_; }
    const Feature& feature(std::size_t i) const { return features_[i]; }
    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t input_size() const { return input_size_; }
    const std::vector<std::size_t>& sensitive_features() const { return sensitive_; }
    std::vector<VarId> sensitive_vars() const;
    bool is_sensitive_node(unsigned node) const;

    // Cartesian product of per-feature choices, in lexicographic order.
    const std::vector<SensitiveChoice>& choices() const { return choices_; }
    // Constraints on the sensitive input nodes selecting one choice.
    Box choice_box(const SensitiveChoice& c) const;
    std::string choice_label(const SensitiveChoice& c) const;
    // Whether a concrete input lies in the given choice.
    bool in_choice(std::span<const Rational> x, const SensitiveChoice& c) const;

    void check_against(const NetworkModel& m) const;

private:
    std::vector<Feature> features_;
    std::size_t input_size_ = 0;
    std::vector<std::size_t> sensitive_;
    std::vector<SensitiveChoice> choices_;
};

InputSpec parse_spec(std::string_view text);

struct Restriction {
    std::size_t feature = 0;
    std::optional<Interval> range;     // continuous
    std::optional<unsigned> value;     // categorical
};

struct Query {
    std::vector<Restriction> constraints;
};

Query parse_query(std::string_view text, const InputSpec& spec);

std::string read_file(const std::string& path);

}  // namespace fairsplit
