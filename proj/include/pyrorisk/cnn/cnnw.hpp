// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pyrorisk/cnn/layers.hpp"
#include "pyrorisk/cnn/network.hpp"
#include "pyrorisk/cnn/tensor.hpp"

/// CNNW portable weight format, all integers and reals little-endian:
///
///   "CNNW"  u32 version(=1)  u32 layer_count
///   per layer:
///     u8 type        1 Conv2D, 2 MaxPool, 3 Flatten, 4 Dense
///     u8 activation  0 None, 1 ReLU, 2 LeakyReLU, 3 Tanh, 4 Sigmoid, 5 Softmax
///     [f32 alpha]    only when activation = 2
///     u8 frozen      0 or 1
///     u32 dims       Conv2D: f, C_in, C_out, stride, pad | MaxPool: f, s | Dense: in, out
///     f32 weights    Conv2D: (row, col, in, out) | Dense: (in, out), last index fastest
///     f32 bias       Conv2D/Dense only
///   u32 CRC-32 (IEEE) of every preceding byte
namespace pyrorisk::cnn {

enum class CnnwErrorCode {
    BadMagic,
    UnsupportedVersion,
    Truncated,
    ChecksumMismatch,
    ShapeInconsistent,
    BadTag,
    TrailingBytes,
};

class CnnwError : public std::runtime_error {
public:
    CnnwError(CnnwErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    CnnwErrorCode code() const noexcept { return code_; }

private:
    CnnwErrorCode code_;
};

inline constexpr std::uint32_t kCnnwVersion = 1;

std::vector<std::uint8_t> save_weights(std::span<const Layer> layers);
std::vector<std::uint8_t> save_weights(const Network& net);

/// Parses and verifies a CNNW stream. Either returns the complete layer
/// stack or throws CnnwError; adjacent layers must agree on channel and
/// vector sizes.
std::vector<Layer> load_weights(std::span<const std::uint8_t> bytes);

/// load_weights + Network::build; a spatial shape failure is reported as
/// CnnwErrorCode::ShapeInconsistent.
Network load_network(std::span<const std::uint8_t> bytes, Shape input, NetworkOptions options = {});

std::vector<std::uint8_t> read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, std::span<const std::uint8_t> bytes);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

/// Fixture tensor files shared with the exporter:
///   "TEN3"  u32 version(=1)  u32 H  u32 W  u32 C  f32[H*W*C] (row, col, channel)
/// Class-score fixtures use shape 1 x 1 x K.
std::vector<std::uint8_t> encode_tensor(const Tensor3& t);
Tensor3 decode_tensor(std::span<const std::uint8_t> bytes);

}  // namespace pyrorisk::cnn
