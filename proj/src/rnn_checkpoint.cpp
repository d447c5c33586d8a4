#include "seqlab/rnn/checkpoint.hpp"

#include <fstream>

#include "seqlab/error.hpp"

namespace seqlab::rnn {
namespace {

constexpr const char* kFormat = "seqlab-checkpoint";
constexpr int kVersion = 1;

nlohmann::json tensor_json(const std::string& name, const Matrix<double>& m) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) values.push_back(m(i, j));
  return {{"name", name}, {"shape", {m.rows(), m.cols()}}, {"values", std::move(values)}};
}

Matrix<double> tensor_from(const nlohmann::json& t, Eigen::Index rows, Eigen::Index cols) {
  const auto shape = t.at("shape").get<std::vector<Eigen::Index>>();
  const auto values = t.at("values").get<std::vector<double>>();
  if (shape.size() != 2 || shape[0] != rows || shape[1] != cols ||
      static_cast<Eigen::Index>(values.size()) != rows * cols) {
    throw ShapeError("checkpoint tensor '" + t.at("name").get<std::string>() + "' has an unexpected shape");
  }
  Matrix<double> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = values[static_cast<std::size_t>(i * cols + j)];
  return m;
}

}  // namespace

nlohmann::json checkpoint_to_json(const Checkpoint& checkpoint) {
  const auto& m = checkpoint.model;
  m.check_shapes();
  nlohmann::json tensors = nlohmann::json::array();
  for (std::size_t l = 0; l < m.depth(); ++l) {
    const auto prefix = "layer" + std::to_string(l) + ".";
    tensors.push_back(tensor_json(prefix + "W", m.layers[l].W));
    tensors.push_back(tensor_json(prefix + "R", m.layers[l].R));
    tensors.push_back(tensor_json(prefix + "b", m.layers[l].b));
  }
  tensors.push_back(tensor_json("readout.W", m.readout.W));
  tensors.push_back(tensor_json("readout.b", m.readout.b));
  return {{"format", kFormat},
          {"version", kVersion},
          {"cell", std::string(to_string(m.kind))},
          {"inputs", m.inputs()},
          {"units", m.units()},
          {"layers", m.depth()},
          {"meta", checkpoint.meta},
          {"tensors", std::move(tensors)}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("format").get<std::string>() != kFormat || doc.at("version").get<int>() != kVersion) {
      throw ShapeError("not a seqlab checkpoint (or unsupported version)");
    }
    const auto kind = parse_cell_kind(doc.at("cell").get<std::string>());
    const auto inputs = doc.at("inputs").get<std::size_t>();
    const auto units = doc.at("units").get<std::size_t>();
    const auto depth = doc.at("layers").get<std::size_t>();
    Checkpoint out;
    out.model = Model<double>::zeros(kind, inputs, units, depth);
    out.meta = doc.value("meta", nlohmann::json::object());

    const auto& tensors = doc.at("tensors");
    if (tensors.size() != 3 * depth + 2) throw ShapeError("checkpoint has the wrong number of tensors");
    std::size_t k = 0;
    for (auto& layer : out.model.layers) {
      layer.W = tensor_from(tensors[k++], layer.W.rows(), layer.W.cols());
      layer.R = tensor_from(tensors[k++], layer.R.rows(), layer.R.cols());
      layer.b = tensor_from(tensors[k++], layer.b.rows(), 1);
    }
    auto& r = out.model.readout;
    r.W = tensor_from(tensors[k++], r.W.rows(), r.W.cols());
    r.b = tensor_from(tensors[k++], r.b.rows(), 1);
    out.model.check_shapes();
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out << checkpoint_to_json(checkpoint).dump() << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read checkpoint " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError("malformed checkpoint " + path.string() + ": " + e.what());
  }
  return checkpoint_from_json(doc);
}

}  // namespace seqlab::rnn
