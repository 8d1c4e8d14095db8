#include "fairsplit/model.hpp"

#include <fstream>
#include <sstream>

namespace fairsplit {

namespace {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view raw = text.substr(pos, end - pos);
        ++number;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        std::istringstream is{std::string(raw)};
        Line line{number, {}};
        for (std::string tok; is >> tok;) line.tokens.push_back(tok);
        if (!line.tokens.empty()) lines.push_back(std::move(line));
        if (end == text.size()) break;
        pos = end + 1;
    }
    return lines;
}

Rational rational_at(const Line& line, std::size_t i) {
    try {
        return parse_rational(line.tokens[i]);
    } catch (const std::invalid_argument& e) {
        throw parse_error(line.number, e.what());
    }
}

std::size_t count_at(const Line& line, std::size_t i) {
    const std::string& tok = line.tokens[i];
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
        throw parse_error(line.number, "expected a count, got '" + tok + "'");
    }
    return std::stoul(tok);
}

}  // namespace

LinExpr Layer::affine(std::size_t row, unsigned prev_layer) const {
    LinExpr e(biases[row]);
    const auto& w = weights[row];
    for (std::size_t k = 0; k < w.size(); ++k) e.add_term(make_var(prev_layer, static_cast<unsigned>(k)), w[k]);
    return e;
}

NetworkModel::NetworkModel(std::size_t input_size, std::vector<Layer> layers)
    : input_size_(input_size), layers_(std::move(layers)) {
    if (layers_.empty()) throw model_error("network has no layers");
    std::size_t prev = input_size_;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const Layer& l = layers_[i];
        if (l.rows() == 0) throw model_error("layer " + std::to_string(i + 1) + " has no nodes");
        for (const auto& row : l.weights) {
            if (row.size() != prev) {
                throw model_error("shape mismatch in layer " + std::to_string(i + 1) + ": expected " +
                                  std::to_string(prev) + " columns, got " + std::to_string(row.size()));
            }
        }
        if (l.biases.size() != l.rows()) {
            throw model_error("shape mismatch in layer " + std::to_string(i + 1) + ": " +
                              std::to_string(l.biases.size()) + " biases for " + std::to_string(l.rows()) +
                              " nodes");
        }
        bool last = i + 1 == layers_.size();
        if (!last && l.activation != Activation::relu) {
            throw model_error("hidden layer " + std::to_string(i + 1) + " must use relu");
        }
        if (last && l.activation != Activation::identity) {
            throw model_error("output layer must use identity");
        }
        prev = l.rows();
    }
    if (output_size() < 2) throw model_error("network needs at least two outputs");
    std::size_t offset = 0;
    for (std::size_t i = 0; i + 1 < layers_.size(); ++i) {
        hidden_offsets_.push_back(offset);
        offset += layers_[i].rows();
    }
    hidden_offsets_.push_back(offset);
}

std::size_t NetworkModel::hidden_node_count() const { return hidden_offsets_.back(); }

std::size_t NetworkModel::hidden_offset(unsigned layer) const { return hidden_offsets_.at(layer - 1); }

NetworkModel parse_model(std::string_view text) {
    auto lines = tokenize(text);
    std::size_t at = 0;
    if (lines.empty()) throw parse_error(1, "empty model file");
    const Line& head = lines[at++];
    if (head.tokens.size() != 2 || head.tokens[0] != "inputs") {
        throw parse_error(head.number, "expected 'inputs <k>'");
    }
    std::size_t inputs = count_at(head, 1);

    std::vector<Layer> layers;
    std::size_t prev = inputs;
    while (at < lines.size()) {
        const Line& decl = lines[at++];
        if (decl.tokens.size() != 4 || decl.tokens[0] != "layer") {
            throw parse_error(decl.number, "expected 'layer <rows> <cols> <relu|identity>'");
        }
        Layer layer;
        std::size_t rows = count_at(decl, 1);
        std::size_t cols = count_at(decl, 2);
        if (decl.tokens[3] == "relu") {
            layer.activation = Activation::relu;
        } else if (decl.tokens[3] == "identity") {
            layer.activation = Activation::identity;
        } else {
            throw parse_error(decl.number, "unsupported activation '" + decl.tokens[3] + "'");
        }
        if (cols != prev) {
            throw parse_error(decl.number, "shape mismatch: layer declares " + std::to_string(cols) +
                                               " columns but the previous layer has " + std::to_string(prev) +
                                               " nodes");
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (at >= lines.size()) throw parse_error(decl.number, "missing weight rows");
            const Line& row = lines[at++];
            if (row.tokens.size() != cols) {
                throw parse_error(row.number, "shape mismatch: expected " + std::to_string(cols) + " weights, got " +
                                                  std::to_string(row.tokens.size()));
            }
            std::vector<Rational> w;
            for (std::size_t k = 0; k < cols; ++k) w.push_back(rational_at(row, k));
            layer.weights.push_back(std::move(w));
        }
        if (at >= lines.size()) throw parse_error(decl.number, "missing bias line");
        const Line& bias = lines[at++];
        if (bias.tokens.empty() || bias.tokens[0] != "bias") throw parse_error(bias.number, "expected 'bias'");
        if (bias.tokens.size() != rows + 1) {
            throw parse_error(bias.number, "shape mismatch: expected " + std::to_string(rows) + " biases, got " +
                                               std::to_string(bias.tokens.size() - 1));
        }
        for (std::size_t k = 1; k <= rows; ++k) layer.biases.push_back(rational_at(bias, k));
        prev = rows;
        layers.push_back(std::move(layer));
    }
    try {
        return NetworkModel(inputs, std::move(layers));
    } catch (const model_error& e) {
        throw parse_error(lines.back().number, e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

NetworkModel load_model(const std::string& path) { return parse_model(read_file(path)); }

std::vector<Rational> eval_scores(const NetworkModel& m, std::span<const Rational> x) {
    std::vector<Rational> cur(x.begin(), x.end());
    for (const Layer& l : m.layers()) {
        std::vector<Rational> next(l.rows());
        for (std::size_t j = 0; j < l.rows(); ++j) {
            Rational acc = l.biases[j];
            for (std::size_t k = 0; k < cur.size(); ++k) {
                if (l.weights[j][k] != 0) acc += l.weights[j][k] * cur[k];
            }
            if (l.activation == Activation::relu && acc < 0) acc = 0;
            next[j] = std::move(acc);
        }
        cur = std::move(next);
    }
    return cur;
}

std::size_t argmax_lowest(std::span<const Rational> scores) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.size(); ++j) {
        if (scores[j] > scores[best]) best = j;
    }
    return best;
}

std::size_t eval_concrete(const NetworkModel& m, std::span<const Rational> x) {
    auto scores = eval_scores(m, x);
    return argmax_lowest(scores);
}

}  // namespace fairsplit
