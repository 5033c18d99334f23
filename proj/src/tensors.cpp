#include "negscope/tensors.hpp"

#include <cstring>
#include <fstream>

#include "negscope/errors.hpp"

namespace negscope {

namespace {

constexpr char kMagic[4] = {'N', 'S', 'T', 'F'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::ifstream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParseError("tensor file '" + path + "' is truncated");
  return value;
}

}  // namespace

uint64_t NamedTensor::numel() const {
  uint64_t n = 1;
  for (uint64_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

void write_tensors(const std::string& path, const std::vector<NamedTensor>& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write tensor file '" + path + "'");
  out.write(kMagic, 4);
  put<uint32_t>(out, kVersion);
  put<uint32_t>(out, static_cast<uint32_t>(tensors.size()));
  for (const NamedTensor& t : tensors) {
    if (t.numel() != t.data.size())
      throw ArgumentError("tensor '" + t.name + "' shape does not match its data size");
    put<uint32_t>(out, static_cast<uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    put<uint32_t>(out, static_cast<uint32_t>(t.shape.size()));
    for (uint64_t d : t.shape) put<uint64_t>(out, d);
    out.write(reinterpret_cast<const char*>(t.data.data()),
              static_cast<std::streamsize>(t.data.size() * sizeof(float)));
  }
  if (!out) throw ConfigError("failed while writing tensor file '" + path + "'");
}

std::map<std::string, NamedTensor> read_tensors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read tensor file '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ParseError("'" + path + "' is not a tensor file");
  const uint32_t version = take<uint32_t>(in, path);
  if (version != kVersion)
    throw ParseError("tensor file '" + path + "' has unsupported version " +
                     std::to_string(version));
  const uint32_t count = take<uint32_t>(in, path);
  std::map<std::string, NamedTensor> out;
  for (uint32_t i = 0; i < count; ++i) {
    NamedTensor t;
    const uint32_t name_len = take<uint32_t>(in, path);
    t.name.resize(name_len);
    in.read(t.name.data(), name_len);
    const uint32_t ndim = take<uint32_t>(in, path);
    for (uint32_t d = 0; d < ndim; ++d) t.shape.push_back(take<uint64_t>(in, path));
    t.data.resize(t.numel());
    in.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    if (!in) throw ParseError("tensor file '" + path + "' is truncated");
    out[t.name] = std::move(t);
  }
  return out;
}

NamedTensor to_tensor(const std::string& name, const Eigen::MatrixXf& m) {
  NamedTensor t;
  t.name = name;
  t.shape = {static_cast<uint64_t>(m.rows()), static_cast<uint64_t>(m.cols())};
  t.data.reserve(static_cast<size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) t.data.push_back(m(r, c));
  }
  return t;
}

Eigen::MatrixXf to_matrix(const NamedTensor& t) {
  uint64_t rows = 1, cols = 1;
  if (t.shape.size() == 1) {
    rows = 1;
    cols = t.shape[0];
  } else if (t.shape.size() == 2) {
    rows = t.shape[0];
    cols = t.shape[1];
  } else {
    throw ShapeError("tensor '" + t.name + "' has rank " + std::to_string(t.shape.size()) +
                     ", expected 1 or 2");
  }
  Eigen::MatrixXf m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = t.data[i++];
  }
  return m;
}

Eigen::VectorXf to_vector(const NamedTensor& t) {
  Eigen::MatrixXf m = to_matrix(t);
  if (m.rows() != 1 && m.cols() != 1)
    throw ShapeError("tensor '" + t.name + "' is not a vector");
  Eigen::VectorXf v(m.size());
  size_t i = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) v(static_cast<Eigen::Index>(i++)) = m(r, c);
  }
  return v;
}

const NamedTensor& require_tensor(const std::map<std::string, NamedTensor>& tensors,
                                  const std::string& name, const std::string& file) {
  auto it = tensors.find(name);
  if (it == tensors.end())
    throw ConfigError("tensor '" + name + "' missing from '" + file + "'");
  return it->second;
}

}  // namespace negscope
