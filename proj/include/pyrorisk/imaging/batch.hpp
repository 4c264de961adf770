// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pyrorisk/cnn/tensor.hpp"
#include "pyrorisk/imaging/augment.hpp"
#include "pyrorisk/imaging/manifest.hpp"

namespace pyrorisk::imaging {

struct BatchError {
    std::string path;
    std::string message;
};

struct Batch {
    std::vector<cnn::Tensor3> images;  // pixel values scaled to [0, 1]
    std::vector<Label> labels;
    std::vector<std::string> paths;
    std::vector<BatchError> errors;  // entries skipped while filling this batch

    std::size_t size() const { return images.size(); }
};

struct BatchOptions {
    std::size_t batch_size = 16;
    bool shuffle = true;
    std::uint64_t seed = 0;
    /// nullopt means: augment only the Train split with `augment_config`.
    std::optional<bool> augment;
    AugmentConfig augment_config;
    /// Throw on the first unreadable entry instead of recording it.
    bool strict = false;
    /// Prefix joined to manifest paths before loading.
    std::string root;
};

using ImageLoader = std::function<RasterImage(const std::string& path)>;

/// Single-consumer stream over one split. Each epoch visits every entry
/// exactly once, in an order fixed by (seed, epoch).
class BatchStream {
public:
    BatchStream(const DatasetManifest& manifest, Split split, BatchOptions options = {}, ImageLoader loader = {});

    /// Next batch of the current epoch, or nullopt at epoch end (the next
    /// call starts the following epoch).
    std::optional<Batch> next();

    std::size_t epoch() const { return epoch_; }
    std::size_t entries() const { return entries_.size(); }
    bool augmenting() const { return augment_; }

    /// Entry order for a given epoch.
    std::vector<std::size_t> epoch_order(std::size_t epoch) const;

private:
    std::vector<ManifestEntry> entries_;
    BatchOptions options_;
    ImageLoader loader_;
    bool augment_ = false;
    std::size_t epoch_ = 0;
    std::size_t cursor_ = 0;
    std::vector<std::size_t> order_;
};

}  // namespace pyrorisk::imaging
