#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace negscope {

// Named float32 tensor container, little-endian:
//   magic "NSTF", u32 version, u32 count,
//   then per tensor: u32 name_len, name, u32 ndim, u64 dims..., f32 data...
// Matrices are stored row-major.
struct NamedTensor {
  std::string name;
  std::vector<uint64_t> shape;
  std::vector<float> data;

  uint64_t numel() const;
};

void write_tensors(const std::string& path, const std::vector<NamedTensor>& tensors);
std::map<std::string, NamedTensor> read_tensors(const std::string& path);

NamedTensor to_tensor(const std::string& name, const Eigen::MatrixXf& m);
Eigen::MatrixXf to_matrix(const NamedTensor& t);
// Requires a 1-D or 1xN/Nx1 tensor.
Eigen::VectorXf to_vector(const NamedTensor& t);

// Lookup with a helpful error; throws ConfigError when `name` is absent.
const NamedTensor& require_tensor(const std::map<std::string, NamedTensor>& tensors,
                                  const std::string& name, const std::string& file);

}  // namespace negscope
