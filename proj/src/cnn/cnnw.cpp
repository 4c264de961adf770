// SPDX-License-Identifier: Apache-2.0
#include "pyrorisk/cnn/cnnw.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "pyrorisk/common/error.hpp"

namespace pyrorisk::cnn {

namespace {

enum : std::uint8_t { kTagConv = 1, kTagPool = 2, kTagFlatten = 3, kTagDense = 4 };

constexpr std::uint8_t kMagic[4] = {'C', 'N', 'N', 'W'};
constexpr std::uint8_t kTensorMagic[4] = {'T', 'E', 'N', '3'};

class Writer {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f32s(std::span<const float> vs) {
        for (float v : vs) f32(v);
    }
    void raw(std::span<const std::uint8_t> b) { bytes_.insert(bytes_.end(), b.begin(), b.end()); }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

template <typename Error>
class Reader {
public:
    Reader(std::span<const std::uint8_t> bytes, Error truncated) : bytes_(bytes), truncated_(truncated) {}

    std::size_t remaining() const { return bytes_.size() - pos_; }
    std::size_t position() const { return pos_; }

    void need(std::uint64_t n, const char* what) const {
        if (n > remaining()) throw truncated_(std::string("stream ends inside ") + what);
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return bytes_[pos_++];
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
    std::vector<float> f32s(std::uint64_t n, const char* what) {
        need(n * 4, what);
        std::vector<float> out(n);
        for (auto& v : out) v = f32(what);
        return out;
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
    Error truncated_;
};

[[noreturn]] void fail(CnnwErrorCode code, const std::string& what) { throw CnnwError(code, "CNNW: " + what); }

void write_activation(Writer& w, const Activation& act) {
    w.u8(static_cast<std::uint8_t>(act.kind));
    if (act.kind == ActivationKind::LeakyReLU) w.f32(act.alpha);
}

// Element counts saturate instead of wrapping so oversized headers read as
// truncation rather than allocating.
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > UINT64_MAX / 4 / a) return UINT64_MAX / 4;
    return a * b;
}

std::uint32_t checked_dim(std::uint32_t v, const char* what) {
    if (v == 0) fail(CnnwErrorCode::ShapeInconsistent, std::string(what) + " must be positive");
    return v;
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
    uLong crc = ::crc32(0L, Z_NULL, 0);
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
        crc = ::crc32(crc, bytes.data() + pos, chunk);
        pos += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> save_weights(std::span<const Layer> layers) {
    Writer w;
    w.raw(kMagic);
    w.u32(kCnnwVersion);
    w.u32(static_cast<std::uint32_t>(layers.size()));
    for (const auto& layer : layers) {
        if (const auto* c = std::get_if<Conv2D>(&layer)) {
            if (c->kernel.size() != c->kernel_size() || c->bias.size() != c->out_channels) {
                throw DomainError("conv", "weights do not match declared dimensions");
            }
            w.u8(kTagConv);
            write_activation(w, c->activation);
            w.u8(c->frozen ? 1 : 0);
            for (auto d : {c->filter, c->in_channels, c->out_channels, c->stride, c->pad}) w.u32(d);
            w.f32s(c->kernel);
            w.f32s(c->bias);
        } else if (const auto* p = std::get_if<MaxPool>(&layer)) {
            w.u8(kTagPool);
            w.u8(0);
            w.u8(p->frozen ? 1 : 0);
            w.u32(p->filter);
            w.u32(p->stride);
        } else if (const auto* f = std::get_if<Flatten>(&layer)) {
            w.u8(kTagFlatten);
            w.u8(0);
            w.u8(f->frozen ? 1 : 0);
        } else {
            const auto& d = std::get<Dense>(layer);
            if (d.weights.size() != std::size_t{d.in} * d.out || d.bias.size() != d.out) {
                throw DomainError("dense", "weights do not match declared dimensions");
            }
            w.u8(kTagDense);
            write_activation(w, d.activation);
            w.u8(d.frozen ? 1 : 0);
            w.u32(d.in);
            w.u32(d.out);
            w.f32s(d.weights);
            w.f32s(d.bias);
        }
    }
    w.u32(crc32(w.bytes()));
    return std::move(w.bytes());
}

std::vector<std::uint8_t> save_weights(const Network& net) { return save_weights(net.layers()); }

std::vector<Layer> load_weights(std::span<const std::uint8_t> bytes) {
    const auto truncated = [](const std::string& what) { return CnnwError(CnnwErrorCode::Truncated, "CNNW: " + what); };
    Reader r(bytes, truncated);

    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        if (bytes.size() < 4 && std::equal(bytes.begin(), bytes.end(), std::begin(kMagic))) {
            fail(CnnwErrorCode::Truncated, "stream ends inside magic");
        }
        fail(CnnwErrorCode::BadMagic, "missing 'CNNW' magic");
    }
    for (int i = 0; i < 4; ++i) r.u8("magic");
    const auto version = r.u32("version");
    if (version != kCnnwVersion) fail(CnnwErrorCode::UnsupportedVersion, "version " + std::to_string(version) + " not supported");
    const auto count = r.u32("layer count");

    auto read_activation = [&](std::uint8_t tag) {
        if (tag > static_cast<std::uint8_t>(ActivationKind::Softmax)) {
            fail(CnnwErrorCode::BadTag, "unknown activation tag " + std::to_string(tag));
        }
        Activation act{static_cast<ActivationKind>(tag), 0.0f};
        if (act.kind == ActivationKind::LeakyReLU) {
            act.alpha = r.f32("leaky relu alpha");
            if (!std::isfinite(act.alpha)) fail(CnnwErrorCode::ShapeInconsistent, "non-finite leaky relu alpha");
        }
        return act;
    };
    auto read_frozen = [&]() {
        const auto v = r.u8("frozen flag");
        if (v > 1) fail(CnnwErrorCode::BadTag, "frozen flag must be 0 or 1");
        return v == 1;
    };

    std::vector<Layer> layers;
    for (std::uint32_t i = 0; i < count; ++i) {
        const auto type = r.u8("layer type");
        const auto act_tag = r.u8("activation tag");
        switch (type) {
            case kTagConv: {
                Conv2D c;
                c.activation = read_activation(act_tag);
                c.frozen = read_frozen();
                c.filter = checked_dim(r.u32("conv dims"), "conv filter");
                c.in_channels = checked_dim(r.u32("conv dims"), "conv C_in");
                c.out_channels = checked_dim(r.u32("conv dims"), "conv C_out");
                c.stride = checked_dim(r.u32("conv dims"), "conv stride");
                c.pad = r.u32("conv dims");
                const auto nk = sat_mul(sat_mul(c.filter, c.filter), sat_mul(c.in_channels, c.out_channels));
                c.kernel = r.f32s(nk, "conv kernel");
                c.bias = r.f32s(c.out_channels, "conv bias");
                layers.emplace_back(std::move(c));
                break;
            }
            case kTagPool: {
                if (act_tag != 0) fail(CnnwErrorCode::BadTag, "max-pool layer with an activation");
                MaxPool p;
                p.frozen = read_frozen();
                p.filter = checked_dim(r.u32("pool dims"), "pool filter");
                p.stride = checked_dim(r.u32("pool dims"), "pool stride");
                layers.emplace_back(p);
                break;
            }
            case kTagFlatten: {
                if (act_tag != 0) fail(CnnwErrorCode::BadTag, "flatten layer with an activation");
                Flatten f;
                f.frozen = read_frozen();
                layers.emplace_back(f);
                break;
            }
            case kTagDense: {
                Dense d;
                d.activation = read_activation(act_tag);
                d.frozen = read_frozen();
                d.in = checked_dim(r.u32("dense dims"), "dense in");
                d.out = checked_dim(r.u32("dense dims"), "dense out");
                d.weights = r.f32s(sat_mul(d.in, d.out), "dense weights");
                d.bias = r.f32s(d.out, "dense bias");
                layers.emplace_back(std::move(d));
                break;
            }
            default: fail(CnnwErrorCode::BadTag, "unknown layer type " + std::to_string(type));
        }
    }

    const auto body_end = r.position();
    const auto stored = r.u32("checksum");
    if (r.remaining() != 0) fail(CnnwErrorCode::TrailingBytes, std::to_string(r.remaining()) + " bytes after checksum");
    if (stored != crc32(bytes.first(body_end))) fail(CnnwErrorCode::ChecksumMismatch, "CRC-32 mismatch");

    for (const auto& layer : layers) {
        for (float v : std::visit(
                 [](const auto& l) -> std::vector<float> {
                     using T = std::decay_t<decltype(l)>;
                     if constexpr (std::is_same_v<T, Conv2D>) return l.kernel;
                     else if constexpr (std::is_same_v<T, Dense>) return l.weights;
                     else return {};
                 },
                 layer)) {
            if (!std::isfinite(v)) fail(CnnwErrorCode::ShapeInconsistent, "non-finite weight");
        }
    }

    // Channel / vector-size agreement between neighbours. Spatial extents
    // are checked when the stack is bound to an input shape.
    std::int64_t channels = -1;  // unknown until the first conv
    bool flat = false;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto where = "layer " + std::to_string(i) + ": ";
        if (const auto* c = std::get_if<Conv2D>(&layers[i])) {
            if (flat) fail(CnnwErrorCode::ShapeInconsistent, where + "convolution after flatten");
            if (channels >= 0 && channels != c->in_channels) {
                fail(CnnwErrorCode::ShapeInconsistent, where + "C_in " + std::to_string(c->in_channels) +
                                                          " != previous channels " + std::to_string(channels));
            }
            channels = c->out_channels;
        } else if (std::holds_alternative<MaxPool>(layers[i])) {
            if (flat) fail(CnnwErrorCode::ShapeInconsistent, where + "pooling after flatten");
        } else if (std::holds_alternative<Flatten>(layers[i])) {
            flat = true;
            channels = -1;
        } else {
            const auto& d = std::get<Dense>(layers[i]);
            if (channels >= 0 && flat && channels != d.in) {
                fail(CnnwErrorCode::ShapeInconsistent,
                     where + "dense in " + std::to_string(d.in) + " != previous outputs " + std::to_string(channels));
            }
            flat = true;
            channels = d.out;
        }
    }
    return layers;
}

Network load_network(std::span<const std::uint8_t> bytes, Shape input, NetworkOptions options) {
    auto layers = load_weights(bytes);
    try {
        return Network::build(std::move(layers), input, std::move(options));
    } catch (const DomainError& e) {
        throw CnnwError(CnnwErrorCode::ShapeInconsistent, std::string("CNNW: ") + e.what());
    }
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError(path, "cannot open file");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError(path, "cannot write file");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> encode_tensor(const Tensor3& t) {
    Writer w;
    w.raw(kTensorMagic);
    w.u32(1);
    w.u32(t.height());
    w.u32(t.width());
    w.u32(t.channels());
    w.f32s(t.data());
    return std::move(w.bytes());
}

Tensor3 decode_tensor(std::span<const std::uint8_t> bytes) {
    const auto truncated = [](const std::string& what) { return DomainError("tensor", what); };
    Reader r(bytes, truncated);
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kTensorMagic, 4) != 0) throw DomainError("tensor", "missing 'TEN3' magic");
    for (int i = 0; i < 4; ++i) r.u8("magic");
    if (r.u32("version") != 1) throw DomainError("tensor", "unsupported version");
    Shape s;
    s.height = r.u32("shape");
    s.width = r.u32("shape");
    s.channels = r.u32("shape");
    auto data = r.f32s(s.elements(), "tensor data");
    if (r.remaining() != 0) throw DomainError("tensor", "trailing bytes");
    return Tensor3(s, std::move(data));
}

}  // namespace pyrorisk::cnn
