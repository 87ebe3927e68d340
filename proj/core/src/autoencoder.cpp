#include "wormwatch/autoencoder.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wormwatch/error.hpp"

namespace wormwatch::autoencoder {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Columns per evaluation block; bounds the hidden-activation scratch size.
constexpr Eigen::Index kBlock = 2048;

void check_input(const AutoencoderModel& model, Eigen::Index rows) {
  if (rows != model.w1.cols())
    throw Error(Errc::DimensionMismatch, "input has " + std::to_string(rows) +
                                             " values, model expects " +
                                             std::to_string(model.w1.cols()));
}

void check_nonempty(Eigen::Index cols) {
  if (cols == 0) throw Error(Errc::EmptyDataset, "no samples");
}

}  // namespace

AutoencoderModel init_model(std::size_t input_dim, std::size_t hidden_dim, std::uint64_t seed) {
  if (input_dim == 0 || hidden_dim == 0)
    throw Error(Errc::BadParams, "model dimensions must be at least 1");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto in = static_cast<Eigen::Index>(input_dim);
  const auto hid = static_cast<Eigen::Index>(hidden_dim);

  AutoencoderModel m;
  m.k = input_dim / 2;
  m.w1.resize(hid, in);
  m.w2.resize(in, hid);
  // Filled row-major so the draw order matches the flattened layout.
  const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  for (Eigen::Index r = 0; r < hid; ++r)
    for (Eigen::Index c = 0; c < in; ++c) m.w1(r, c) = s1 * normal(rng);
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (Eigen::Index r = 0; r < in; ++r)
    for (Eigen::Index c = 0; c < hid; ++c) m.w2(r, c) = s2 * normal(rng);
  m.b1 = Eigen::VectorXd::Zero(hid);
  m.b2 = Eigen::VectorXd::Zero(in);
  return m;
}

Eigen::VectorXd forward(const AutoencoderModel& model, std::span<const double> x) {
  check_input(model, static_cast<Eigen::Index>(x.size()));
  Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::VectorXd h = (model.w1 * v + model.b1).array().tanh().matrix();
  return model.w2 * h + model.b2;
}

Eigen::MatrixXd pack(std::span<const features::WindowSample> samples, std::size_t input_dim) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(input_dim),
                    static_cast<Eigen::Index>(samples.size()));
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto& values = samples[j].values;
    if (values.size() != input_dim)
      throw Error(Errc::DimensionMismatch, "window " + std::to_string(j) + " has " +
                                               std::to_string(values.size()) +
                                               " values, expected " + std::to_string(input_dim));
    x.col(static_cast<Eigen::Index>(j)) =
        Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(input_dim));
  }
  return x;
}

double sse_loss(const AutoencoderModel& model, const Eigen::MatrixXd& samples) {
  check_nonempty(samples.cols());
  check_input(model, samples.rows());
  double total = 0.0;
  for (Eigen::Index start = 0; start < samples.cols(); start += kBlock) {
    const auto n = std::min(kBlock, samples.cols() - start);
    const auto x = samples.middleCols(start, n);
    Eigen::MatrixXd h = ((model.w1 * x).colwise() + model.b1).array().tanh().matrix();
    Eigen::MatrixXd d = ((model.w2 * h).colwise() + model.b2) - x;
    total += d.squaredNorm();
  }
  return 0.5 * total;
}

double sse_loss(const AutoencoderModel& model, std::span<const features::WindowSample> samples) {
  check_nonempty(static_cast<Eigen::Index>(samples.size()));
  return sse_loss(model, pack(samples, model.input_dim()));
}

Eigen::VectorXd gradient(const AutoencoderModel& model, const Eigen::MatrixXd& samples) {
  check_nonempty(samples.cols());
  check_input(model, samples.rows());

  Eigen::MatrixXd g_w1 = Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols());
  Eigen::VectorXd g_b1 = Eigen::VectorXd::Zero(model.b1.size());
  Eigen::MatrixXd g_w2 = Eigen::MatrixXd::Zero(model.w2.rows(), model.w2.cols());
  Eigen::VectorXd g_b2 = Eigen::VectorXd::Zero(model.b2.size());

  for (Eigen::Index start = 0; start < samples.cols(); start += kBlock) {
    const auto n = std::min(kBlock, samples.cols() - start);
    const auto x = samples.middleCols(start, n);
    Eigen::MatrixXd h = ((model.w1 * x).colwise() + model.b1).array().tanh().matrix();
    Eigen::MatrixXd d = ((model.w2 * h).colwise() + model.b2) - x;
    g_w2.noalias() += d * h.transpose();
    g_b2 += d.rowwise().sum();
    Eigen::MatrixXd back =
        ((model.w2.transpose() * d).array() * (1.0 - h.array().square())).matrix();
    g_w1.noalias() += back * x.transpose();
    g_b1 += back.rowwise().sum();
  }

  AutoencoderModel g;
  g.w1 = std::move(g_w1);
  g.b1 = std::move(g_b1);
  g.w2 = std::move(g_w2);
  g.b2 = std::move(g_b2);
  return flatten(g);
}

Eigen::VectorXd gradient(const AutoencoderModel& model,
                         std::span<const features::WindowSample> samples) {
  check_nonempty(static_cast<Eigen::Index>(samples.size()));
  return gradient(model, pack(samples, model.input_dim()));
}

Eigen::VectorXd flatten(const AutoencoderModel& model) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(model.parameter_count()));
  Eigen::Index off = 0;
  auto put_matrix = [&](const Eigen::MatrixXd& m) {
    Eigen::Map<RowMajor>(v.data() + off, m.rows(), m.cols()) = m;
    off += m.size();
  };
  auto put_vector = [&](const Eigen::VectorXd& b) {
    v.segment(off, b.size()) = b;
    off += b.size();
  };
  put_matrix(model.w1);
  put_vector(model.b1);
  put_matrix(model.w2);
  put_vector(model.b2);
  return v;
}

void unflatten(AutoencoderModel& model, const Eigen::VectorXd& params) {
  if (static_cast<std::size_t>(params.size()) != model.parameter_count())
    throw Error(Errc::DimensionMismatch, "parameter vector has " + std::to_string(params.size()) +
                                             " entries, model has " +
                                             std::to_string(model.parameter_count()));
  Eigen::Index off = 0;
  auto take_matrix = [&](Eigen::MatrixXd& m) {
    m = Eigen::Map<const RowMajor>(params.data() + off, m.rows(), m.cols());
    off += m.size();
  };
  auto take_vector = [&](Eigen::VectorXd& b) {
    b = params.segment(off, b.size());
    off += b.size();
  };
  take_matrix(model.w1);
  take_vector(model.b1);
  take_matrix(model.w2);
  take_vector(model.b2);
}

namespace {

using json = nlohmann::ordered_json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  return arr;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

std::vector<double> read_array(const json& doc, const char* key, std::size_t expected) {
  if (!doc.contains(key) || !doc[key].is_array())
    throw Error(Errc::BadFormat, std::string("missing array '") + key + "'");
  const auto& arr = doc[key];
  if (arr.size() != expected)
    throw Error(Errc::BadFormat, std::string("'") + key + "' has " + std::to_string(arr.size()) +
                                     " entries, expected " + std::to_string(expected));
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : arr) {
    if (!v.is_number()) throw Error(Errc::BadFormat, std::string("non-numeric entry in '") + key + "'");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw Error(Errc::BadFormat, std::string("non-finite entry in '") + key + "'");
    out.push_back(d);
  }
  return out;
}

template <typename T>
T read_field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(Errc::BadFormat, std::string("missing field '") + key + "'");
  try {
    return doc[key].get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::BadFormat, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

void save_model(std::ostream& out, const AutoencoderModel& model) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["k"] = model.k;
  doc["input_dim"] = model.input_dim();
  doc["hidden_dim"] = model.hidden_dim();
  doc["layout_version"] = model.layout_version;
  doc["layout"] = features::kLayoutName;
  doc["norm"] = {{"a_min", model.norm.a_min},
                 {"a_max", model.norm.a_max},
                 {"w_min", model.norm.w_min},
                 {"w_max", model.norm.w_max}};
  doc["w1"] = matrix_to_json(model.w1);
  doc["b1"] = vector_to_json(model.b1);
  doc["w2"] = matrix_to_json(model.w2);
  doc["b2"] = vector_to_json(model.b2);
  out << doc.dump(1) << '\n';
}

std::string save_model(const AutoencoderModel& model) {
  std::ostringstream out;
  save_model(out, model);
  return out.str();
}

AutoencoderModel load_model(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::BadFormat, std::string("model is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::BadFormat, "model document is not an object");

  const int format_version = read_field<int>(doc, "format_version");
  if (format_version != kFormatVersion)
    throw Error(Errc::VersionMismatch,
                "unsupported format_version " + std::to_string(format_version));
  const int layout_version = read_field<int>(doc, "layout_version");
  if (layout_version != features::kLayoutVersion)
    throw Error(Errc::VersionMismatch,
                "unsupported layout_version " + std::to_string(layout_version));
  if (read_field<std::string>(doc, "layout") != features::kLayoutName)
    throw Error(Errc::BadFormat, "unknown layout name");

  const auto k = read_field<std::size_t>(doc, "k");
  const auto in_dim = read_field<std::size_t>(doc, "input_dim");
  const auto hid = read_field<std::size_t>(doc, "hidden_dim");
  if (in_dim == 0 || hid == 0) throw Error(Errc::BadFormat, "zero model dimension");
  if (k != in_dim / 2) throw Error(Errc::BadFormat, "input_dim is inconsistent with k");

  if (!doc.contains("norm") || !doc["norm"].is_object())
    throw Error(Errc::BadFormat, "missing object 'norm'");
  const auto& n = doc["norm"];
  AutoencoderModel m;
  m.k = k;
  m.layout_version = layout_version;
  m.norm = {read_field<double>(n, "a_min"), read_field<double>(n, "a_max"),
            read_field<double>(n, "w_min"), read_field<double>(n, "w_max")};
  if (m.norm.a_max < m.norm.a_min || m.norm.w_max < m.norm.w_min)
    throw Error(Errc::BadFormat, "normalization bounds are reversed");

  const auto in_i = static_cast<Eigen::Index>(in_dim);
  const auto hid_i = static_cast<Eigen::Index>(hid);
  auto w1 = read_array(doc, "w1", hid * in_dim);
  auto b1 = read_array(doc, "b1", hid);
  auto w2 = read_array(doc, "w2", in_dim * hid);
  auto b2 = read_array(doc, "b2", in_dim);
  m.w1 = Eigen::Map<const RowMajor>(w1.data(), hid_i, in_i);
  m.b1 = Eigen::Map<const Eigen::VectorXd>(b1.data(), hid_i);
  m.w2 = Eigen::Map<const RowMajor>(w2.data(), in_i, hid_i);
  m.b2 = Eigen::Map<const Eigen::VectorXd>(b2.data(), in_i);
  return m;
}

AutoencoderModel load_model(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

}  // namespace wormwatch::autoencoder
