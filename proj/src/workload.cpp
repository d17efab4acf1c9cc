#include "lacsim/workload.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace lacsim {

namespace {

uint64_t dim_product(const std::vector<int>& dims) {
    uint64_t n = 1;
    for (int d : dims) n *= static_cast<uint64_t>(d);
    return n;
}

// Unbiased bounded draw; deterministic across platforms, unlike
// std::uniform_int_distribution.
uint64_t bounded_draw(std::mt19937_64& rng, uint64_t bound) {
    const uint64_t threshold = (~uint64_t{0} - bound + 1) % bound;
    for (;;) {
        const uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

}  // namespace

uint64_t LayerShape::products() const {
    return static_cast<uint64_t>(filters) * windows() * channels * filter_h * filter_k;
}

void LayerShape::validate() const {
    if (channels < 1 || input_x < 1 || input_y < 1 || filters < 1 || filter_h < 1 ||
        filter_k < 1 || stride < 1) {
        throw std::invalid_argument("layer: all dimensions and stride must be >= 1");
    }
    if (filter_h > input_x || filter_k > input_y) {
        throw std::invalid_argument("layer: filter " + std::to_string(filter_h) + "x" +
                                    std::to_string(filter_k) + " larger than input " +
                                    std::to_string(input_x) + "x" + std::to_string(input_y));
    }
}

std::vector<WindowCoord> enumerate_windows(const LayerShape& layer) {
    layer.validate();
    std::vector<WindowCoord> out;
    out.reserve(static_cast<size_t>(layer.windows()));
    for (int oh = 0; oh < layer.out_h(); ++oh) {
        for (int ok = 0; ok < layer.out_k(); ++ok) {
            out.push_back(WindowCoord{oh * layer.stride, ok * layer.stride});
        }
    }
    return out;
}

size_t TensorTrace::element_count() const {
    return static_cast<size_t>(dim_product(dims));
}

void TensorTrace::validate() const {
    if (dims.empty() || dims.size() > 4) {
        throw std::invalid_argument("trace: rank must be 1..4");
    }
    for (int d : dims) {
        if (d < 1) throw std::invalid_argument("trace: dimensions must be >= 1");
    }
    if (precision < 1 || precision > 16) {
        throw std::invalid_argument("trace: precision must be in [1,16]");
    }
    if (data.size() != element_count()) {
        throw std::invalid_argument("trace: element count mismatch (header says " +
                                    std::to_string(element_count()) + ", got " +
                                    std::to_string(data.size()) + ")");
    }
    for (size_t i = 0; i < data.size(); ++i) {
        if (quantize(data[i], precision).raw != data[i]) {
            throw std::invalid_argument("trace: element " + std::to_string(i) + " value " +
                                        std::to_string(data[i]) +
                                        " exceeds declared precision " +
                                        std::to_string(precision));
        }
    }
}

TensorTrace gen_synthetic(const std::vector<int>& dims, double density, int precision,
                          uint64_t seed) {
    if (density < 0.0 || density > 1.0) {
        throw std::invalid_argument("gen_synthetic: density must be in [0,1]");
    }
    TensorTrace trace;
    trace.dims = dims;
    trace.precision = precision;
    const size_t n = trace.element_count();
    trace.data.assign(n, 0);

    const auto nonzero = static_cast<size_t>(std::llround(density * static_cast<double>(n)));
    std::mt19937_64 rng(seed);
    // Nonzero values representable at `precision` bits, zero excluded:
    // [-2^(p-1), -1] and [1, 2^(p-1)-1].
    const uint64_t value_range = (uint64_t{1} << precision) - 1;
    const int32_t low = -(1 << (precision - 1));
    for (size_t i = 0; i < nonzero; ++i) {
        const auto idx = static_cast<int64_t>(bounded_draw(rng, value_range));
        int32_t value = low + static_cast<int32_t>(idx);
        if (value >= 0) value += 1;  // skip zero
        trace.data[i] = static_cast<int16_t>(value);
    }
    // Fisher-Yates over all positions so the nonzeros land uniformly.
    for (size_t i = n; i > 1; --i) {
        const size_t j = bounded_draw(rng, i);
        std::swap(trace.data[i - 1], trace.data[j]);
    }
    trace.validate();
    return trace;
}

namespace {

constexpr char kTraceMagic[4] = {'Q', 'T', '1', '6'};
constexpr uint32_t kTraceVersion = 1;

void put_u32(std::ostream& os, uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff),
                           static_cast<char>((v >> 24) & 0xff)};
    os.write(bytes, 4);
}

uint32_t get_u32(std::istream& is, const char* what) {
    unsigned char bytes[4];
    if (!is.read(reinterpret_cast<char*>(bytes), 4)) {
        throw std::runtime_error(std::string("trace: truncated header reading ") + what);
    }
    return static_cast<uint32_t>(bytes[0]) | (static_cast<uint32_t>(bytes[1]) << 8) |
           (static_cast<uint32_t>(bytes[2]) << 16) | (static_cast<uint32_t>(bytes[3]) << 24);
}

}  // namespace

void save_trace(const std::string& path, const TensorTrace& trace) {
    trace.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("trace: cannot open " + path + " for writing");
    os.write(kTraceMagic, 4);
    put_u32(os, kTraceVersion);
    put_u32(os, static_cast<uint32_t>(trace.dims.size()));
    for (int d : trace.dims) put_u32(os, static_cast<uint32_t>(d));
    put_u32(os, static_cast<uint32_t>(trace.precision));
    for (int16_t v : trace.data) {
        const auto u = static_cast<uint16_t>(v);
        const char bytes[2] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff)};
        os.write(bytes, 2);
    }
    if (!os) throw std::runtime_error("trace: write failed for " + path);
}

TensorTrace load_trace(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("trace: cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kTraceMagic, 4) != 0) {
        throw std::runtime_error("trace: bad magic in " + path);
    }
    const uint32_t version = get_u32(is, "version");
    if (version != kTraceVersion) {
        throw std::runtime_error("trace: unsupported version " + std::to_string(version) +
                                 " in " + path);
    }
    const uint32_t rank = get_u32(is, "rank");
    if (rank < 1 || rank > 4) {
        throw std::runtime_error("trace: rank " + std::to_string(rank) + " out of range in " +
                                 path);
    }
    TensorTrace trace;
    for (uint32_t i = 0; i < rank; ++i) {
        trace.dims.push_back(static_cast<int>(get_u32(is, "dims")));
    }
    trace.precision = static_cast<int>(get_u32(is, "precision"));
    const size_t n = trace.element_count();
    trace.data.resize(n);
    for (size_t i = 0; i < n; ++i) {
        unsigned char bytes[2];
        if (!is.read(reinterpret_cast<char*>(bytes), 2)) {
            throw std::runtime_error("trace: element count mismatch in " + path +
                                     " (expected " + std::to_string(n) + " elements, file ends at " +
                                     std::to_string(i) + ")");
        }
        trace.data[i] = static_cast<int16_t>(static_cast<uint16_t>(bytes[0]) |
                                             (static_cast<uint16_t>(bytes[1]) << 8));
    }
    char extra;
    if (is.read(&extra, 1)) {
        throw std::runtime_error("trace: element count mismatch in " + path +
                                 " (trailing bytes after " + std::to_string(n) + " elements)");
    }
    trace.validate();
    return trace;
}

void PrecisionProfile::validate() const {
    if (act_bits.empty()) throw std::invalid_argument("profile: no activation precisions");
    for (int p : act_bits) {
        if (p < 1 || p > 16) throw std::invalid_argument("profile: activation precision out of [1,16]");
    }
    if (weight_bits < 1 || weight_bits > 16) {
        throw std::invalid_argument("profile: weight precision out of [1,16]");
    }
}

GroupStream::GroupStream(const LayerShape& layer, const TensorTrace& acts,
                         const TensorTrace& wgts, const TileGeometry& tile)
    : layer_(layer), acts_(&acts), wgts_(&wgts), tile_(tile) {
    layer.validate();
    if (tile.windows_parallel < 1 || tile.filters_parallel < 1 || tile.lanes_per_pe < 1 ||
        tile.lanes_per_pe > 16) {
        throw std::invalid_argument("tile: windows/filters >= 1 and lanes in [1,16]");
    }
    if (acts.dims != std::vector<int>{layer.channels, layer.input_x, layer.input_y}) {
        throw std::invalid_argument("groups: activation trace shape does not match layer");
    }
    if (wgts.dims !=
        std::vector<int>{layer.filters, layer.channels, layer.filter_h, layer.filter_k}) {
        throw std::invalid_argument("groups: weight trace shape does not match layer");
    }
    windows_ = enumerate_windows(layer);
    window_batches_ = (layer.windows() + tile.windows_parallel - 1) / tile.windows_parallel;
    filter_batches_ = (layer.filters + tile.filters_parallel - 1) / tile.filters_parallel;
    channel_chunks_ = (layer.channels + tile.lanes_per_pe - 1) / tile.lanes_per_pe;
    chunk_total_ = layer.filter_h * layer.filter_k * channel_chunks_;
    total_groups_ = static_cast<uint64_t>(window_batches_) * filter_batches_ * chunk_total_;
}

std::optional<GroupTrace> GroupStream::next() {
    if (emitted_ >= total_groups_) return std::nullopt;
    GroupTrace g = make_group();
    ++emitted_;
    return g;
}

GroupTrace GroupStream::make_group() const {
    const uint64_t chunk = emitted_ % chunk_total_;
    const uint64_t fb = (emitted_ / chunk_total_) % filter_batches_;
    const uint64_t wb = emitted_ / (static_cast<uint64_t>(chunk_total_) * filter_batches_);

    const int cc = static_cast<int>(chunk % channel_chunks_);
    const int spatial = static_cast<int>(chunk / channel_chunks_);
    const int fr = spatial / layer_.filter_k;
    const int fc = spatial % layer_.filter_k;

    GroupTrace g;
    g.windows = tile_.windows_parallel;
    g.filters = tile_.filters_parallel;
    g.lanes = tile_.lanes_per_pe;
    g.window_base = static_cast<int>(wb) * tile_.windows_parallel;
    g.filter_base = static_cast<int>(fb) * tile_.filters_parallel;
    g.chunk_index = static_cast<int>(chunk);
    g.chunk_count = chunk_total_;
    g.acts.assign(static_cast<size_t>(g.windows) * g.lanes, 0);
    g.wgts.assign(static_cast<size_t>(g.filters) * g.lanes, 0);

    for (int w = 0; w < g.windows; ++w) {
        const int window = g.window_base + w;
        if (window >= layer_.windows()) break;
        const WindowCoord origin = windows_[static_cast<size_t>(window)];
        for (int l = 0; l < g.lanes; ++l) {
            const int ch = cc * tile_.lanes_per_pe + l;
            if (ch >= layer_.channels) break;
            const size_t idx =
                (static_cast<size_t>(ch) * layer_.input_x + (origin.row + fr)) * layer_.input_y +
                (origin.col + fc);
            g.acts[static_cast<size_t>(w) * g.lanes + l] = acts_->data[idx];
        }
    }
    for (int f = 0; f < g.filters; ++f) {
        const int filter = g.filter_base + f;
        if (filter >= layer_.filters) break;
        for (int l = 0; l < g.lanes; ++l) {
            const int ch = cc * tile_.lanes_per_pe + l;
            if (ch >= layer_.channels) break;
            const size_t idx =
                ((static_cast<size_t>(filter) * layer_.channels + ch) * layer_.filter_h + fr) *
                    layer_.filter_k +
                fc;
            g.wgts[static_cast<size_t>(f) * g.lanes + l] = wgts_->data[idx];
        }
    }
    return g;
}

GroupStream build_groups(const LayerShape& layer, const TensorTrace& acts,
                         const TensorTrace& wgts, const TileGeometry& tile) {
    return GroupStream(layer, acts, wgts, tile);
}

void quantize_network(Network& net, const PrecisionProfile& profile) {
    profile.validate();
    if (profile.act_bits.size() != net.layers.size()) {
        throw std::invalid_argument("profile '" + profile.name + "' has " +
                                    std::to_string(profile.act_bits.size()) +
                                    " layers but network '" + net.name + "' has " +
                                    std::to_string(net.layers.size()));
    }
    for (size_t i = 0; i < net.layers.size(); ++i) {
        LayerData& layer = net.layers[i];
        const int pa = profile.act_bits[i];
        for (int16_t& v : layer.acts.data) v = quantize(v, pa).raw;
        layer.acts.precision = pa;
        for (int16_t& v : layer.wgts.data) v = quantize(v, profile.weight_bits).raw;
        layer.wgts.precision = profile.weight_bits;
    }
}

}  // namespace lacsim
