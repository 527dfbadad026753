#include "lsm/latent_mc.hpp"

#include <cmath>
#include <stdexcept>

namespace lsm {

MotionField scale_motion(const MotionField& input_field, double scale) {
    if (scale < 1.0) throw std::invalid_argument("scale_motion: scale must be >= 1");
    const int lh = static_cast<int>(std::floor(input_field.height / scale));
    const int lw = static_cast<int>(std::floor(input_field.width / scale));
    if (lh < 1 || lw < 1) throw std::invalid_argument("scale_motion: latent grid is empty");
    MotionField out(lh, lw);
    for (int j = 0; j < lh; ++j) {
        const int sy = std::min<long>(input_field.height - 1,
                                      std::lround((j + 0.5) * scale - 0.5));
        for (int i = 0; i < lw; ++i) {
            const int sx = std::min<long>(input_field.width - 1,
                                          std::lround((i + 0.5) * scale - 0.5));
            const std::size_t src = input_field.index(sy, sx);
            const std::size_t dst = out.index(j, i);
            out.vx[dst] = static_cast<float>(input_field.vx[src] / scale);
            out.vy[dst] = static_cast<float>(input_field.vy[src] / scale);
            out.valid[dst] = input_field.valid[src];
        }
    }
    return out;
}

LatentPrediction predict_tensor(const Tensor& reference, const MotionField& input_motion,
                                double scale) {
    const MotionField field = scale_motion(input_motion, scale);
    if (field.height != reference.height() || field.width != reference.width()) {
        throw std::invalid_argument(
            "predict_tensor: reference grid does not match motion grid / scale");
    }
    const int h = reference.height();
    const int w = reference.width();
    LatentPrediction pred{Tensor(reference.channels(), h, w, 0.0f), Mask(h, w, false), scale};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = field.index(y, x);
            if (!field.valid[i]) continue;
            const double sx = x - static_cast<double>(field.vx[i]);
            const double sy = y - static_cast<double>(field.vy[i]);
            if (sx < 0.0 || sx > w - 1.0 || sy < 0.0 || sy > h - 1.0) continue;
            pred.valid.set(y, x, true);
            for (int c = 0; c < reference.channels(); ++c) {
                pred.predicted.at(c, y, x) = bilinear_sample(reference, c, sx, sy);
            }
        }
    }
    return pred;
}

EndToEndResult end_to_end_predict(const NetworkSpec& net, const WeightStore& weights,
                                  const Tensor& reference_image, const AffineParams& params,
                                  int layer) {
    WarpResult warped = warp_image(reference_image, params);
    const std::vector<Tensor> ref_feats =
        forward(net, weights, normalize_image(reference_image));
    const std::vector<Tensor> tgt_feats = forward(net, weights, normalize_image(warped.image));
    const int n_layers = static_cast<int>(net.layers.size());
    if (layer < 0 || layer >= n_layers) layer = n_layers - 1;
    const int tap = layer + 1; // forward() result index (0 is the input)
    const double scale = net.cumulative_scale(layer);

    EndToEndResult res;
    res.prediction = predict_tensor(ref_feats[tap], warped.motion, scale);
    res.actual = tgt_feats[tap];
    res.input_motion = std::move(warped.motion);
    res.latent_grid = Grid{res.actual.height(), res.actual.width(), scale};
    return res;
}

Mask interior_mask(const Mask& base, const MotionField& latent_field, int border) {
    if (base.height != latent_field.height || base.width != latent_field.width) {
        throw std::invalid_argument("interior_mask: mask and field dims differ");
    }
    Mask out(base.height, base.width, false);
    const double xlo = border, xhi = base.width - 1.0 - border;
    const double ylo = border, yhi = base.height - 1.0 - border;
    for (int y = 0; y < base.height; ++y) {
        for (int x = 0; x < base.width; ++x) {
            if (!base.at(y, x)) continue;
            if (x < xlo || x > xhi || y < ylo || y > yhi) continue;
            const std::size_t i = latent_field.index(y, x);
            const double sx = x - static_cast<double>(latent_field.vx[i]);
            const double sy = y - static_cast<double>(latent_field.vy[i]);
            if (sx < xlo || sx > xhi || sy < ylo || sy > yhi) continue;
            out.set(y, x, true);
        }
    }
    return out;
}

int padding_border_cells(const NetworkSpec& net, int height, int width, int layer) {
    const int n_layers = static_cast<int>(net.layers.size());
    if (layer < 0 || layer >= n_layers) layer = n_layers - 1;
    const ReceptiveField rfx = net.receptive_field_x(layer);
    const ReceptiveField rfy = net.receptive_field_y(layer);
    const Grid grid = net.grid_at(height, width, layer);
    const long long lw = grid.width;
    const long long lh = grid.height;
    const auto [fx, lx] = rfx.clean_range(width);
    const auto [fy, ly] = rfy.clean_range(height);
    long long border = 0;
    border = std::max(border, fx);
    border = std::max(border, fy);
    border = std::max(border, lw - 1 - lx);
    border = std::max(border, lh - 1 - ly);
    return static_cast<int>(border);
}

} // namespace lsm
