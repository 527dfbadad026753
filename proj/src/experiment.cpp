#include "lsm/experiment.hpp"

#include "lsm/latent_mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace lsm {

const char* transform_kind_name(TransformKind kind) {
    switch (kind) {
        case TransformKind::translate_x: return "translate-x";
        case TransformKind::translate_y: return "translate-y";
        case TransformKind::rotate: return "rotate";
        case TransformKind::scale: return "scale";
        case TransformKind::shear_x: return "shear-x";
        case TransformKind::shear_y: return "shear-y";
    }
    return "?";
}

TransformKind parse_transform_kind(const std::string& name) {
    for (TransformKind k : {TransformKind::translate_x, TransformKind::translate_y,
                            TransformKind::rotate, TransformKind::scale,
                            TransformKind::shear_x, TransformKind::shear_y}) {
        if (name == transform_kind_name(k)) return k;
    }
    throw std::invalid_argument("unknown transform kind: " + name);
}

AffineParams transform_params(TransformKind kind, double value) {
    AffineParams p;
    switch (kind) {
        case TransformKind::translate_x: p.tx = value; break;
        case TransformKind::translate_y: p.ty = value; break;
        case TransformKind::rotate: p.rot = value; break;
        case TransformKind::scale: p.sx = p.sy = value; break;
        case TransformKind::shear_x: p.shx = value; break;
        case TransformKind::shear_y: p.shy = value; break;
    }
    return p;
}

int metric_border(const PredictSetup& setup) {
    if (setup.border >= 0) return setup.border;
    return padding_border_cells(setup.net, setup.image.height(), setup.image.width(),
                                setup.layer);
}

MetricsReport evaluate_transform(const PredictSetup& setup, const AffineParams& params) {
    EndToEndResult res = end_to_end_predict(setup.net, setup.weights, setup.image,
                                            params, setup.layer);
    const int border = metric_border(setup);
    Mask mask = res.prediction.valid;
    if (border > 0) {
        const MotionField latent = scale_motion(res.input_motion, res.prediction.scale);
        mask = interior_mask(mask, latent, border);
    }
    return nrmse(res.prediction.predicted, res.actual, mask);
}

Tensor synth_texture(int channels, int height, int width, std::uint64_t seed) {
    if (channels < 1 || height < 1 || width < 1) {
        throw std::invalid_argument("synth_texture: dimensions must be >= 1");
    }
    const int cells[3] = {16, 8, 4};
    const double amps[3] = {1.0, 0.5, 0.25};
    Tensor img(channels, height, width);
    for (int c = 0; c < channels; ++c) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double v = 0.0;
                for (int o = 0; o < 3; ++o) {
                    const double gx = static_cast<double>(x) / cells[o];
                    const double gy = static_cast<double>(y) / cells[o];
                    const int ix = static_cast<int>(gx);
                    const int iy = static_cast<int>(gy);
                    const double fx = gx - ix;
                    const double fy = gy - iy;
                    auto lattice = [&](int lx, int ly) {
                        const std::uint64_t key =
                            mix_key(seed, (static_cast<std::uint64_t>(o) << 40) ^
                                              (static_cast<std::uint64_t>(c) << 32) ^
                                              (static_cast<std::uint64_t>(ly) << 16) ^
                                              static_cast<std::uint64_t>(lx));
                        return 2.0 * (static_cast<double>(key >> 11) * 0x1.0p-53) - 1.0;
                    };
                    const double top = lattice(ix, iy) * (1 - fx) + lattice(ix + 1, iy) * fx;
                    const double bot = lattice(ix, iy + 1) * (1 - fx) + lattice(ix + 1, iy + 1) * fx;
                    v += amps[o] * (top * (1 - fy) + bot * fy);
                }
                img.at(c, y, x) = static_cast<float>(
                    std::clamp(127.5 + 72.0 * v, 0.0, 255.0));
            }
        }
    }
    return img;
}

Tensor to_gray(const Tensor& img) {
    if (img.channels() == 1) return img;
    Tensor gray(1, img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int c = 0; c < img.channels(); ++c) acc += img.at(c, y, x);
            gray.at(0, y, x) = static_cast<float>(acc / img.channels());
        }
    }
    return gray;
}

void run_sweep(const PredictSetup& setup, const SweepSpec& spec, std::ostream& csv) {
    if (spec.step <= 0.0) throw std::invalid_argument("sweep: step must be > 0");
    if (spec.start > spec.stop) throw std::invalid_argument("sweep: start must be <= stop");
    csv << "transform,value," << MetricsReport::csv_header() << "\n";
    char buf[64];
    const double eps = spec.step * 1e-9;
    for (int i = 0;; ++i) {
        const double v = spec.start + i * spec.step;
        if (v > spec.stop + eps) break;
        const MetricsReport rep = evaluate_transform(setup, transform_params(spec.kind, v));
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        csv << transform_kind_name(spec.kind) << "," << buf << "," << rep.csv_row() << "\n";
    }
}

AffineParams sample_affine(const HistogramSpec& spec, SplitMix64& rng) {
    AffineParams p;
    p.tx = rng.uniform(-spec.tx_bound, spec.tx_bound);
    p.ty = rng.uniform(-spec.ty_bound, spec.ty_bound);
    p.sx = rng.uniform(spec.scale_min, spec.scale_max);
    p.sy = rng.uniform(spec.scale_min, spec.scale_max);
    p.shx = rng.uniform(-spec.shear_bound, spec.shear_bound);
    p.shy = rng.uniform(-spec.shear_bound, spec.shear_bound);
    p.rot = rng.uniform(-spec.rot_bound, spec.rot_bound);
    return p;
}

void run_histogram(const PredictSetup& setup, const HistogramSpec& spec,
                   std::ostream& samples_csv, std::ostream& bins_csv) {
    if (spec.count < 0 || spec.bins < 1) {
        throw std::invalid_argument("histogram: bad count or bin count");
    }
    samples_csv << "sample,tx,ty,sx,sy,shx,shy,rot,nrmse\n";
    bins_csv << "bin_lo,bin_hi,count\n";
    SplitMix64 rng(spec.seed);
    std::vector<double> values;
    char buf[256];
    for (int i = 0; i < spec.count; ++i) {
        const AffineParams p = sample_affine(spec, rng);
        const MetricsReport rep = evaluate_transform(setup, p);
        values.push_back(rep.nrmse);
        std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                      i, p.tx, p.ty, p.sx, p.sy, p.shx, p.shy, p.rot, rep.nrmse);
        samples_csv << buf;
    }
    if (values.empty()) return;
    const double top = *std::max_element(values.begin(), values.end());
    const double width = top > 0.0 ? top / spec.bins : 1.0 / spec.bins;
    std::vector<std::size_t> counts(static_cast<std::size_t>(spec.bins), 0);
    for (double v : values) {
        int b = static_cast<int>(v / width);
        b = std::clamp(b, 0, spec.bins - 1); // top value lands in the last bin
        ++counts[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < spec.bins; ++b) {
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%zu\n", b * width, (b + 1) * width,
                      counts[static_cast<std::size_t>(b)]);
        bins_csv << buf;
    }
}

void run_fieldviz(const PredictSetup& setup, const Tensor& target_image,
                  std::ostream& input_csv, std::ostream& latent_csv) {
    if (setup.image.height() != target_image.height() ||
        setup.image.width() != target_image.width()) {
        throw std::invalid_argument("fieldviz: image sizes differ");
    }
    const MotionField input_field = estimate_motion(
        to_gray(setup.image), to_gray(target_image), BlockMatchConfig::input_preset());
    write_motion_csv(input_csv, input_field);

    const std::vector<Tensor> ref_feats =
        forward(setup.net, setup.weights, normalize_image(setup.image));
    const std::vector<Tensor> tgt_feats =
        forward(setup.net, setup.weights, normalize_image(target_image));
    const int n_layers = static_cast<int>(setup.net.layers.size());
    int layer = setup.layer;
    if (layer < 0 || layer >= n_layers) layer = n_layers - 1;
    const std::vector<MotionField> fields = estimate_motion_multichannel(
        ref_feats[layer + 1], tgt_feats[layer + 1], BlockMatchConfig::latent_preset());

    latent_csv << "channel,x,y,vx,vy,valid\n";
    char buf[160];
    for (std::size_t c = 0; c < fields.size(); ++c) {
        const MotionField& f = fields[c];
        for (int y = 0; y < f.height; ++y) {
            for (int x = 0; x < f.width; ++x) {
                const std::size_t i = f.index(y, x);
                std::snprintf(buf, sizeof(buf), "%zu,%d,%d,%.9g,%.9g,%d\n", c, x, y,
                              static_cast<double>(f.vx[i]), static_cast<double>(f.vy[i]),
                              f.valid[i] ? 1 : 0);
                latent_csv << buf;
            }
        }
    }
}

} // namespace lsm
