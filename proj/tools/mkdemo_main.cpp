// Generates a self-contained demo dataset: two synthetic people, landmark
// files, a muscle config, a PCA training set, and a short frame sequence.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "face_synth.hpp"

using namespace exprclone;
namespace fs = std::filesystem;

namespace {

void write_pair(const std::string& dir, const std::string& base, const synth::FaceParams& params) {
    const RasterImage img = synth::synth_face_image(params);
    const FeaturePointSet pts = synth::synth_landmarks(params);
    write_image(dir + "/" + base + (params.color ? ".ppm" : ".pgm"), img);
    save_feature_points(dir + "/" + base + ".pts", pts);
}

} // namespace

int main(int argc, char** argv) {
    std::string out_dir = "demo";
    if (argc > 1) out_dir = argv[1];
    try {
        fs::create_directories(out_dir);
        fs::create_directories(out_dir + "/train");
        fs::create_directories(out_dir + "/frames");

        write_pair(out_dir, "src_neutral", synth::source_neutral_params());
        write_pair(out_dir, "src_smile", synth::source_smile_params());
        write_pair(out_dir, "tgt_neutral", synth::target_neutral_params());

        std::ofstream cfg(out_dir + "/muscles.cfg");
        cfg << synth::default_muscle_config_text();
        cfg.close();
        std::ofstream empty_cfg(out_dir + "/muscles_empty.cfg");
        empty_cfg << "# no key muscle areas: disables the MD detail boost\n";
        empty_cfg.close();

        const auto train = synth::training_params(synth::target_neutral_params(), 12);
        for (size_t i = 0; i < train.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "train/t%02zu", i);
            write_pair(out_dir, name, train[i]);
            fs::remove(out_dir + "/" + name + ".pts"); // training needs only images
        }

        const synth::FaceParams a = synth::source_neutral_params();
        const synth::FaceParams b = synth::source_smile_params();
        const int frames = 5;
        for (int f = 0; f < frames; ++f) {
            const double t = static_cast<double>(f) / (frames - 1);
            char name[32];
            std::snprintf(name, sizeof(name), "frames/exp_%04d", f);
            write_pair(out_dir, name, synth::lerp_params(a, b, t));
        }

        std::cout << "demo data written to " << out_dir << "/\n"
                  << "try:\n"
                  << "  exprclone clone \\\n"
                  << "    --src-neutral " << out_dir << "/src_neutral.ppm --src-neutral-pts "
                  << out_dir << "/src_neutral.pts \\\n"
                  << "    --src-exp " << out_dir << "/src_smile.ppm --src-exp-pts " << out_dir
                  << "/src_smile.pts \\\n"
                  << "    --tgt-neutral " << out_dir << "/tgt_neutral.ppm --tgt-neutral-pts "
                  << out_dir << "/tgt_neutral.pts \\\n"
                  << "    --muscles " << out_dir << "/muscles.cfg --train-dir " << out_dir
                  << "/train \\\n"
                  << "    --db-report " << out_dir << "/db_report.txt -o " << out_dir
                  << "/result.ppm\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "exprclone-mkdemo: " << e.what() << "\n";
        return 1;
    }
}
