// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/imaging/batch.hpp"

#include <filesystem>
#include <numeric>
#include <stdexcept>

#include "pyrorisk/common/error.hpp"
#include "pyrorisk/common/rng.hpp"

namespace pyrorisk::imaging {

BatchStream::BatchStream(const DatasetManifest& manifest, Split split, BatchOptions options, ImageLoader loader)
    : entries_(manifest.select(split)), options_(std::move(options)), loader_(std::move(loader)) {
    if (entries_.empty()) throw DomainError("split", "no entries in split '" + std::string(to_string(split)) + "'");
    if (options_.batch_size == 0) throw DomainError("batch_size", "must be >= 1");
    augment_ = options_.augment.value_or(split == Split::Train) && !options_.augment_config.is_identity();
    if (augment_) options_.augment_config.validate();
    if (!loader_) loader_ = [](const std::string& p) { return read_png(p); };
    order_ = epoch_order(0);
}

std::vector<std::size_t> BatchStream::epoch_order(std::size_t epoch) const {
    std::vector<std::size_t> order(entries_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (options_.shuffle) {
        Rng rng(derive_seed(options_.seed, epoch));
        rng.shuffle(std::span<std::size_t>(order));
    }
    return order;
}

std::optional<Batch> BatchStream::next() {
    if (cursor_ >= order_.size()) {
        ++epoch_;
        cursor_ = 0;
        order_ = epoch_order(epoch_);
        return std::nullopt;
    }
    Batch batch;
    const std::size_t end = std::min(order_.size(), cursor_ + options_.batch_size);
    for (; cursor_ < end; ++cursor_) {
        const std::size_t idx = order_[cursor_];
        const auto& e = entries_[idx];
        const std::string full =
            options_.root.empty() ? e.path : (std::filesystem::path(options_.root) / e.path).string();
        try {
            RasterImage img = loader_(full);
            if (augment_) {
                Rng rng(derive_seed(derive_seed(options_.seed ^ options_.augment_config.seed, epoch_), idx));
                img = augment(img, options_.augment_config, rng);
            }
            batch.images.push_back(to_tensor(img));
            batch.labels.push_back(e.label);
            batch.paths.push_back(e.path);
        } catch (const std::exception& ex) {
            if (options_.strict) throw std::runtime_error(full + ": " + ex.what());
            batch.errors.push_back({full, ex.what()});
        }
    }
    return batch;
}

}  // namespace pyrorisk::imaging
