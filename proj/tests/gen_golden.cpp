// Regenerates the recorded baselines under tests/golden/. Run manually after
// an intentional numeric change, then review the diff before committing.

#include "lsm/experiment.hpp"
#include "lsm/latent_mc.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_golden <golden-dir>\n";
        return 2;
    }
    const std::string dir = argv[1];
    using namespace lsm;

    PredictSetup setup;
    setup.net = make_toy_net(3);
    setup.weights = seeded_weights(setup.net, 1);
    setup.image = synth_texture(3, 64, 64, 42);

    {
        const Tensor final_tensor = forward(setup.net, setup.weights, setup.image).back();
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a(
                          final_tensor.data().data(), final_tensor.size() * sizeof(float))));
        std::ofstream out(dir + "/toynet_forward_hash.txt");
        out << hex << "\n";
        std::cout << "toynet_forward_hash.txt: " << hex << "\n";
    }
    {
        SweepSpec spec;
        spec.kind = TransformKind::rotate;
        spec.start = -10.0;
        spec.stop = 10.0;
        spec.step = 5.0;
        std::ofstream out(dir + "/sweep_rotate.csv", std::ios::binary);
        run_sweep(setup, spec, out);
        std::cout << "sweep_rotate.csv written\n";
    }
    {
        HistogramSpec spec;
        spec.count = 100;
        spec.seed = 9;
        std::ofstream samples(dir + "/histogram_samples.csv", std::ios::binary);
        std::ofstream bins(dir + "/histogram_bins.csv", std::ios::binary);
        run_histogram(setup, spec, samples, bins);
        std::cout << "histogram_samples.csv / histogram_bins.csv written\n";
    }
    return 0;
}
