#include "lsm/nn.hpp"

#include "lsm/rng.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace lsm {

LayerSpec LayerSpec::conv(int out_channels, int k, int stride, int pad) {
    if (out_channels < 1 || k < 1 || stride < 1 || pad < 0) {
        throw std::invalid_argument("conv layer: bad parameters");
    }
    LayerSpec s;
    s.kind = LayerKind::conv;
    s.out_channels = out_channels;
    s.kernel_h = k;
    s.kernel_w = k;
    s.stride = stride;
    s.pad = pad;
    return s;
}

LayerSpec LayerSpec::relu() {
    LayerSpec s;
    s.kind = LayerKind::relu;
    return s;
}

LayerSpec LayerSpec::sigmoid() {
    LayerSpec s;
    s.kind = LayerKind::sigmoid;
    return s;
}

LayerSpec LayerSpec::maxpool(int window, int stride) {
    if (window < 2 || stride < 1) {
        throw std::invalid_argument("maxpool layer: window must be >= 2, stride >= 1");
    }
    LayerSpec s;
    s.kind = LayerKind::maxpool;
    s.window = window;
    s.stride = stride;
    return s;
}

LayerSpec LayerSpec::downsample(int factor) {
    if (factor < 2) {
        throw std::invalid_argument("downsample layer: factor must be >= 2");
    }
    LayerSpec s;
    s.kind = LayerKind::downsample;
    s.factor = factor;
    return s;
}

int LayerSpec::spatial_stride() const {
    switch (kind) {
        case LayerKind::conv: return stride;
        case LayerKind::maxpool: return stride;
        case LayerKind::downsample: return factor;
        default: return 1;
    }
}

std::pair<long long, long long> ReceptiveField::clean_range(long long input_extent) const {
    // jump*x + lo >= 0 and jump*x + hi <= input_extent - 1
    long long first = lo >= 0 ? 0 : (-lo + jump - 1) / jump;
    long long last = (input_extent - 1 - hi) / jump;
    if (input_extent - 1 - hi < 0) last = -1;
    return {first, last};
}

int NetworkSpec::cumulative_scale(int upto) const {
    int n = upto < 0 || upto >= static_cast<int>(layers.size())
                ? static_cast<int>(layers.size())
                : upto + 1;
    int scale = 1;
    for (int i = 0; i < n; ++i) scale *= layers[i].spatial_stride();
    return scale;
}

int NetworkSpec::channels_at(int upto) const {
    int ch = in_channels;
    for (int i = 0; i <= upto && i < static_cast<int>(layers.size()); ++i) {
        if (layers[i].kind == LayerKind::conv) ch = layers[i].out_channels;
    }
    return ch;
}

namespace {

ReceptiveField receptive_field_axis(const NetworkSpec& net, int upto, bool vertical) {
    int n = upto < 0 || upto >= static_cast<int>(net.layers.size())
                ? static_cast<int>(net.layers.size())
                : upto + 1;
    ReceptiveField rf;
    for (int i = n - 1; i >= 0; --i) {
        const LayerSpec& l = net.layers[i];
        long long s = 1, llo = 0, lhi = 0;
        switch (l.kind) {
            case LayerKind::conv:
                s = l.stride;
                llo = -l.pad;
                lhi = -l.pad + (vertical ? l.kernel_h : l.kernel_w) - 1;
                break;
            case LayerKind::maxpool:
                s = l.stride;
                llo = 0;
                lhi = l.window - 1;
                break;
            case LayerKind::downsample:
                s = l.factor;
                break;
            default:
                break;
        }
        rf.jump *= s;
        rf.lo = s * rf.lo + llo;
        rf.hi = s * rf.hi + lhi;
    }
    return rf;
}

} // namespace

ReceptiveField NetworkSpec::receptive_field_x(int upto) const {
    return receptive_field_axis(*this, upto, false);
}

ReceptiveField NetworkSpec::receptive_field_y(int upto) const {
    return receptive_field_axis(*this, upto, true);
}

Grid NetworkSpec::grid_at(int input_height, int input_width, int upto) const {
    int n = upto < 0 || upto >= static_cast<int>(layers.size())
                ? static_cast<int>(layers.size())
                : upto + 1;
    int h = input_height, w = input_width;
    for (int i = 0; i < n; ++i) {
        const LayerSpec& l = layers[i];
        switch (l.kind) {
            case LayerKind::conv:
                h = (h + 2 * l.pad - l.kernel_h) / l.stride + 1;
                w = (w + 2 * l.pad - l.kernel_w) / l.stride + 1;
                break;
            case LayerKind::maxpool:
                h = (h - l.window) / l.stride + 1;
                w = (w - l.window) / l.stride + 1;
                break;
            case LayerKind::downsample:
                h = h / l.factor;
                w = w / l.factor;
                break;
            default:
                break;
        }
    }
    return Grid{h, w, static_cast<double>(cumulative_scale(upto))};
}

Tensor conv2d(const Tensor& input, const ConvWeights& w, int stride, int pad) {
    if (input.channels() != w.in_channels) {
        throw std::invalid_argument("conv2d: input channels do not match weights");
    }
    if (stride < 1 || pad < 0 || w.out_channels < 1) {
        throw std::invalid_argument("conv2d: bad parameters");
    }
    const int oh = (input.height() + 2 * pad - w.kernel_h) / stride + 1;
    const int ow = (input.width() + 2 * pad - w.kernel_w) / stride + 1;
    if (input.height() + 2 * pad < w.kernel_h || input.width() + 2 * pad < w.kernel_w) {
        throw std::invalid_argument("conv2d: kernel larger than padded input");
    }
    Tensor out(w.out_channels, oh, ow);
    for (int oc = 0; oc < w.out_channels; ++oc) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                double acc = oc < static_cast<int>(w.bias.size()) ? w.bias[oc] : 0.0;
                for (int ic = 0; ic < w.in_channels; ++ic) {
                    for (int ky = 0; ky < w.kernel_h; ++ky) {
                        const int iy = oy * stride + ky - pad;
                        if (iy < 0 || iy >= input.height()) continue;
                        for (int kx = 0; kx < w.kernel_w; ++kx) {
                            const int ix = ox * stride + kx - pad;
                            if (ix < 0 || ix >= input.width()) continue;
                            acc += static_cast<double>(w.weights[w.weight_index(oc, ic, ky, kx)]) *
                                   static_cast<double>(input.at(ic, iy, ix));
                        }
                    }
                }
                out.at(oc, oy, ox) = static_cast<float>(acc);
            }
        }
    }
    return out;
}

Tensor relu(const Tensor& input) {
    Tensor out = input;
    for (float& v : out.data()) v = v > 0.0f ? v : 0.0f;
    return out;
}

Tensor sigmoid(const Tensor& input) {
    Tensor out = input;
    for (float& v : out.data()) {
        v = static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(v))));
    }
    return out;
}

Tensor maxpool(const Tensor& input, int window, int stride) {
    if (window < 2 || stride < 1) {
        throw std::invalid_argument("maxpool: window must be >= 2, stride >= 1");
    }
    if (window > input.height() || window > input.width()) {
        throw std::invalid_argument("maxpool: window larger than input");
    }
    const int oh = (input.height() - window) / stride + 1;
    const int ow = (input.width() - window) / stride + 1;
    Tensor out(input.channels(), oh, ow);
    for (int c = 0; c < input.channels(); ++c) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                float m = -std::numeric_limits<float>::infinity();
                for (int ky = 0; ky < window; ++ky) {
                    for (int kx = 0; kx < window; ++kx) {
                        m = std::max(m, input.at(c, oy * stride + ky, ox * stride + kx));
                    }
                }
                out.at(c, oy, ox) = m;
            }
        }
    }
    return out;
}

Tensor downsample(const Tensor& input, int factor) {
    if (factor < 2) throw std::invalid_argument("downsample: factor must be >= 2");
    const int oh = input.height() / factor;
    const int ow = input.width() / factor;
    if (oh < 1 || ow < 1) throw std::invalid_argument("downsample: output would be empty");
    Tensor out(input.channels(), oh, ow);
    for (int c = 0; c < input.channels(); ++c) {
        for (int oy = 0; oy < oh; ++oy) {
            for (int ox = 0; ox < ow; ++ox) {
                out.at(c, oy, ox) = input.at(c, oy * factor, ox * factor);
            }
        }
    }
    return out;
}

std::vector<Tensor> forward(const NetworkSpec& net, const WeightStore& weights,
                            const Tensor& input) {
    if (input.channels() != net.in_channels) {
        throw std::invalid_argument("forward: input channel count does not match network");
    }
    std::vector<Tensor> outputs;
    outputs.reserve(net.layers.size() + 1);
    outputs.push_back(input);
    std::size_t conv_idx = 0;
    for (const LayerSpec& l : net.layers) {
        const Tensor& x = outputs.back();
        switch (l.kind) {
            case LayerKind::conv: {
                if (conv_idx >= weights.convs.size()) {
                    throw std::invalid_argument("forward: weight store has too few conv layers");
                }
                const ConvWeights& w = weights.convs[conv_idx++];
                if (w.out_channels != l.out_channels || w.in_channels != x.channels() ||
                    w.kernel_h != l.kernel_h || w.kernel_w != l.kernel_w) {
                    throw std::invalid_argument("forward: weight shapes do not bind to layer");
                }
                outputs.push_back(conv2d(x, w, l.stride, l.pad));
                break;
            }
            case LayerKind::relu:
                outputs.push_back(relu(x));
                break;
            case LayerKind::sigmoid:
                outputs.push_back(sigmoid(x));
                break;
            case LayerKind::maxpool:
                outputs.push_back(maxpool(x, l.window, l.stride));
                break;
            case LayerKind::downsample:
                outputs.push_back(downsample(x, l.factor));
                break;
        }
    }
    if (conv_idx != weights.convs.size()) {
        throw std::invalid_argument("forward: weight store has extra conv layers");
    }
    return outputs;
}

Tensor normalize_image(const Tensor& img) {
    Tensor out = img;
    for (float& v : out.data()) v = (v - 127.5f) / 127.5f;
    return out;
}

WeightStore seeded_weights(const NetworkSpec& net, std::uint64_t seed) {
    SplitMix64 rng(seed);
    WeightStore store;
    int ch = net.in_channels;
    for (const LayerSpec& l : net.layers) {
        if (l.kind != LayerKind::conv) continue;
        ConvWeights w;
        w.out_channels = l.out_channels;
        w.in_channels = ch;
        w.kernel_h = l.kernel_h;
        w.kernel_w = l.kernel_w;
        const std::size_t n = static_cast<std::size_t>(w.out_channels) * w.in_channels *
                              w.kernel_h * w.kernel_w;
        const double scale = 1.0 / std::sqrt(static_cast<double>(w.in_channels) *
                                             w.kernel_h * w.kernel_w);
        w.weights.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            w.weights[i] = static_cast<float>(rng.uniform_pm1() * scale);
        }
        w.bias.assign(static_cast<std::size_t>(w.out_channels), 0.0f);
        store.convs.push_back(std::move(w));
        ch = l.out_channels;
    }
    return store;
}

namespace {

int parse_kv_int(const std::string& token, const std::string& key, int line_no) {
    if (token.rfind(key + "=", 0) != 0) {
        throw std::runtime_error("network spec line " + std::to_string(line_no) +
                                 ": expected " + key + "=<int>, got '" + token + "'");
    }
    return std::stoi(token.substr(key.size() + 1));
}

} // namespace

NetworkSpec parse_network(std::istream& in) {
    NetworkSpec net;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind) || kind[0] == '#') continue;
        std::vector<std::string> args;
        std::string tok;
        while (ls >> tok) args.push_back(tok);
        auto arg = [&](const std::string& key, int def = -1) {
            for (const std::string& a : args) {
                if (a.rfind(key + "=", 0) == 0) return parse_kv_int(a, key, line_no);
            }
            if (def < 0) {
                throw std::runtime_error("network spec line " + std::to_string(line_no) +
                                         ": missing " + key + "=");
            }
            return def;
        };
        try {
            if (kind == "conv") {
                net.layers.push_back(LayerSpec::conv(arg("out"), arg("k"), arg("stride", 1), arg("pad", 0)));
            } else if (kind == "relu") {
                net.layers.push_back(LayerSpec::relu());
            } else if (kind == "sigmoid") {
                net.layers.push_back(LayerSpec::sigmoid());
            } else if (kind == "maxpool") {
                int n = arg("n");
                net.layers.push_back(LayerSpec::maxpool(n, arg("stride", n)));
            } else if (kind == "downsample") {
                net.layers.push_back(LayerSpec::downsample(arg("s")));
            } else {
                throw std::runtime_error("unknown layer kind '" + kind + "'");
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& e) {
            throw std::runtime_error("network spec line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return net;
}

NetworkSpec load_network(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open network spec: " + path);
    try {
        return parse_network(f);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

namespace {

void put_u32le(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32le(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) |
           (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) |
           (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32le(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32le(out, bits);
}

float get_f32le(std::istream& in) {
    std::uint32_t bits = get_u32le(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

} // namespace

void write_lfw1(const std::string& path, const WeightStore& w) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write("LFW1", 4);
    for (const ConvWeights& c : w.convs) {
        put_u32le(f, static_cast<std::uint32_t>(c.out_channels));
        put_u32le(f, static_cast<std::uint32_t>(c.in_channels));
        put_u32le(f, static_cast<std::uint32_t>(c.kernel_h));
        put_u32le(f, static_cast<std::uint32_t>(c.kernel_w));
        for (float v : c.weights) put_f32le(f, v);
        put_u32le(f, static_cast<std::uint32_t>(c.bias.size()));
        for (float v : c.bias) put_f32le(f, v);
    }
    if (!f) throw std::runtime_error("LFW1: write failed: " + path);
}

WeightStore read_lfw1(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, "LFW1", 4) != 0) {
        throw std::runtime_error("LFW1: bad magic in " + path);
    }
    WeightStore store;
    while (true) {
        // Peek for EOF between layers.
        if (f.peek() == EOF) break;
        ConvWeights c;
        c.out_channels = static_cast<int>(get_u32le(f));
        c.in_channels = static_cast<int>(get_u32le(f));
        c.kernel_h = static_cast<int>(get_u32le(f));
        c.kernel_w = static_cast<int>(get_u32le(f));
        if (!f || c.out_channels < 1 || c.in_channels < 1 || c.kernel_h < 1 || c.kernel_w < 1) {
            throw std::runtime_error("LFW1: bad layer dims in " + path);
        }
        const std::size_t n = static_cast<std::size_t>(c.out_channels) * c.in_channels *
                              c.kernel_h * c.kernel_w;
        c.weights.resize(n);
        for (float& v : c.weights) v = get_f32le(f);
        const std::uint32_t bias_len = get_u32le(f);
        c.bias.resize(bias_len);
        for (float& v : c.bias) v = get_f32le(f);
        if (!f) throw std::runtime_error("LFW1: truncated layer in " + path);
        store.convs.push_back(std::move(c));
    }
    return store;
}

NetworkSpec make_toy_net(int in_channels) {
    NetworkSpec net;
    net.in_channels = in_channels;
    net.layers = {
        LayerSpec::conv(16, 3, 1, 1),
        LayerSpec::relu(),
        LayerSpec::maxpool(2, 2),
        LayerSpec::conv(32, 3, 1, 1),
        LayerSpec::relu(),
        LayerSpec::maxpool(2, 2),
        LayerSpec::conv(32, 3, 2, 1),
        LayerSpec::relu(),
    };
    return net;
}

} // namespace lsm
