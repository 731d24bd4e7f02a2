// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fitnn/rng.hpp"

namespace fitnn {

class IdxError : public std::runtime_error {
 public:
  enum class Code { io, bad_magic, truncated, bad_dims };

  IdxError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

// Flattened grayscale images, one row per image, pixels scaled into [0, 1].
struct ImageDataset {
  Eigen::MatrixXd images;  // N x (rows*cols)
  int image_rows = 0;
  int image_cols = 0;

  Eigen::Index size() const { return images.rows(); }

  // First n images (n <= 0 keeps everything).
  ImageDataset take(Eigen::Index n) const;
};

// Reads an IDX3 unsigned-byte image file (big-endian header, magic
// 0x00000803) and normalizes pixels by 1/255.
ImageDataset load_idx(const std::string& path);

// Splits [0, n) into consecutive batches of `batch_size` (final short batch
// included). Pass an Rng to shuffle the order first.
std::vector<std::vector<Eigen::Index>> batch_indices(Eigen::Index n,
                                                     Eigen::Index batch_size,
                                                     Rng* shuffle_rng);

// Deterministic batch matrices under a fixed seed.
std::vector<Eigen::MatrixXd> batches(const ImageDataset& ds,
                                     Eigen::Index batch_size,
                                     std::uint64_t shuffle_seed);

Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m,
                            const std::vector<Eigen::Index>& rows);

}  // namespace fitnn
