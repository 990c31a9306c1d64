#include "cli.hpp"

#include "facerec/dataset.hpp"
#include "facerec/evaluation.hpp"
#include "facerec/model_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>

namespace facerec::cli {

namespace fs = std::filesystem;

namespace {

int parse_int(std::string_view text, const char *what) {
  int value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size())
    throw Error(Errc::InvalidSpec, std::string("malformed ") + what + " '" +
                                       std::string(text) + "'");
  return value;
}

FeatureKind parse_feature(const std::string &text) {
  if (text == "raw")
    return FeatureKind::RawPixel;
  if (text == "dct")
    return FeatureKind::DCT;
  throw Error(Errc::InvalidSpec, "unknown feature '" + text + "' (expected raw or dct)");
}

ClassifierRule default_rule(const TrainedModel &model) {
  return ClassifierRule::knn(model.num_classes() == 4 ? 7 : 5);
}

// The parent directory of an output file must already exist.
void require_parent_dir(const fs::path &file) {
  const fs::path parent = file.has_parent_path() ? file.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(parent, ec))
    throw Error(Errc::IoError, "output directory does not exist: " + parent.string());
}

std::ofstream open_output(const fs::path &file) {
  require_parent_dir(file);
  std::ofstream out(file, std::ios::binary);
  if (!out)
    throw Error(Errc::IoError, "cannot open " + file.string() + " for writing");
  return out;
}

void make_dir(const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw Error(Errc::IoError, "cannot create directory " + dir.string());
}

struct TrainArgs {
  std::string manifest;
  std::string out;
  std::string feature = "dct";
  std::string coeffs = "133";
  std::string size = "128x128";
  int components = 0;
};

struct PredictArgs {
  std::string model;
  std::string image;
  std::string rule;
};

struct EvaluateArgs {
  std::string model;
  std::string manifest;
  std::string rule;
  std::string out;
  int jobs = 1;
};

struct SweepArgs {
  std::string manifest;
  std::string out;
  std::string feature = "dct";
  std::string coeffs = "10..200";
  std::string k = "1,3,5,7,9";
  std::string size = "128x128";
  std::string confusion_dir;
  bool centroid = false;
  int jobs = 1;
};

struct ExportArgs {
  std::string model;
  std::string out;
  int count = 6;
};

struct SynthArgs {
  std::string out;
  std::string size = "128x128";
  std::uint64_t seed = 42;
  SyntheticSpec spec;
};

void cmd_train(const TrainArgs &a, std::ostream &out) {
  const auto [w, h] = parse_size(a.size);
  FeatureConfig config;
  config.kind = parse_feature(a.feature);
  config.image_w = w;
  config.image_h = h;
  if (config.kind == FeatureKind::DCT) {
    const std::vector<int> n = parse_coeff_range(a.coeffs);
    if (n.size() != 1)
      throw Error(Errc::InvalidSpec, "train takes a single coefficient count");
    config.n_coeffs = n.front();
  }
  config.validate();
  PcaOptions pca;
  if (a.components > 0)
    pca.max_components = a.components;

  require_parent_dir(a.out);
  const LabeledDataset data = load_manifest(a.manifest, w, h);
  const LabeledDataset train = data.subset(Split::Train);
  const TrainedModel model = train_model(train, config, pca);
  save_model(model, fs::path(a.out));

  const std::vector<std::size_t> counts = train.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c)
    out << "class " << train.class_names[c] << ": " << counts[c] << " training images\n";
  out << "feature dimension: " << config.dimension() << '\n';
  out << "retained components: " << model.eigenspace.size() << '\n';
  out << "model written to " << a.out << '\n';
}

void cmd_predict(const PredictArgs &a, std::ostream &out) {
  const TrainedModel model = load_model(fs::path(a.model));
  const ClassifierRule rule = a.rule.empty() ? default_rule(model) : ClassifierRule::parse(a.rule);
  const GrayImage image = load_image(a.image);
  const Prediction p = classify(model, image, rule);
  out << "label " << model.class_names[static_cast<std::size_t>(p.label)] << '\n';
  if (rule.kind == ClassifierRule::Kind::KNN) {
    out << std::setprecision(10);
    for (std::size_t i = 0; i < p.neighbors.size(); ++i) {
      const Neighbor &n = p.neighbors[i];
      out << "neighbor " << i + 1 << ' ' << n.distance << ' '
          << model.class_names[static_cast<std::size_t>(n.label)] << ' ' << n.index << '\n';
    }
  }
}

void cmd_evaluate(const EvaluateArgs &a, std::ostream &out) {
  const TrainedModel model = load_model(fs::path(a.model));
  const ClassifierRule rule = a.rule.empty() ? default_rule(model) : ClassifierRule::parse(a.rule);
  std::optional<std::ofstream> report;
  if (!a.out.empty())
    report = open_output(a.out);
  const LabeledDataset data =
      load_manifest(a.manifest, model.features.image_w, model.features.image_h);
  const LabeledDataset test = data.subset(Split::Test);
  const Evaluation ev = evaluate(model, test, rule, a.jobs);
  if (report) {
    write_confusion_csv(ev.confusion, *report);
    report->close();
    if (!*report)
      throw Error(Errc::IoError, "failed writing " + a.out);
  }
  out << "rule " << rule.name() << '\n';
  out << "rate " << std::fixed << std::setprecision(4) << ev.rate << '\n';
  out << "correct " << ev.confusion.correct() << " of " << ev.confusion.total() << '\n';
}

void cmd_sweep(const SweepArgs &a, std::ostream &out) {
  const auto [w, h] = parse_size(a.size);
  const FeatureKind kind = parse_feature(a.feature);
  const std::vector<int> k_values = parse_int_list(a.k);
  std::vector<int> coeffs;
  if (kind == FeatureKind::DCT)
    coeffs = parse_coeff_range(a.coeffs);
  std::ofstream csv = open_output(a.out);
  if (!a.confusion_dir.empty())
    make_dir(a.confusion_dir);

  const LabeledDataset data = load_manifest(a.manifest, w, h);
  const LabeledDataset train = data.subset(Split::Train);
  const LabeledDataset test = data.subset(Split::Test);
  SweepOptions options;
  options.jobs = a.jobs;
  options.keep_confusions = !a.confusion_dir.empty();
  const SweepResult result =
      kind == FeatureKind::DCT
          ? sweep_dct(train, test, coeffs, k_values, a.centroid, options)
          : sweep_raw(train, test, k_values, a.centroid, options);

  write_sweep_csv(result, csv);
  csv.close();
  if (!csv)
    throw Error(Errc::IoError, "failed writing " + a.out);

  if (options.keep_confusions)
    for (std::size_t r = 0; r < result.coeff_counts.size(); ++r)
      for (std::size_t c = 0; c < result.rules.size(); ++c) {
        const fs::path file = fs::path(a.confusion_dir) /
                              ("confusion_" + std::to_string(result.coeff_counts[r]) + "_" +
                               result.rules[c].name() + ".csv");
        std::ofstream cm = open_output(file);
        write_confusion_csv(result.confusion(r, c), cm);
      }

  Eigen::Index best_r = 0, best_c = 0;
  const double best = result.rates.maxCoeff(&best_r, &best_c);
  out << "cells " << result.rates.size() << '\n';
  out << "best " << format_rate(best) << " at n_coeffs "
      << result.coeff_counts[static_cast<std::size_t>(best_r)] << ' '
      << result.rules[static_cast<std::size_t>(best_c)].name() << '\n';
}

void cmd_export(const ExportArgs &a, std::ostream &out) {
  const TrainedModel model = load_model(fs::path(a.model));
  if (model.features.kind != FeatureKind::RawPixel)
    throw Error(Errc::DimensionMismatch,
                "eigenfaces can only be reshaped from a raw-pixel model");
  if (a.count < 0 || a.count > model.eigenspace.size())
    throw Error(Errc::IndexOutOfRange, "requested " + std::to_string(a.count) +
                                           " eigenfaces, model retains " +
                                           std::to_string(model.eigenspace.size()));
  make_dir(a.out);
  const int w = model.features.image_w;
  const int h = model.features.image_h;
  save_pgm(mean_image(model.eigenspace, w, h), fs::path(a.out) / "mean.pgm");
  for (int i = 0; i < a.count; ++i)
    save_pgm(reconstruct_eigenface(model.eigenspace, i, w, h),
             fs::path(a.out) / ("eigenface_" + std::to_string(i) + ".pgm"));
  out << "wrote " << a.count << " eigenfaces and mean.pgm to " << a.out << '\n';
}

void cmd_synth(SynthArgs a, std::ostream &out) {
  std::tie(a.spec.width, a.spec.height) = parse_size(a.size);
  const LabeledDataset data = generate_synthetic(a.spec, a.seed);
  const fs::path manifest = write_dataset(data, a.out);
  out << "wrote " << data.samples.size() << " images, manifest " << manifest.string()
      << '\n';
}

} // namespace

std::pair<int, int> parse_size(const std::string &text) {
  const auto x = text.find('x');
  if (x == std::string::npos)
    throw Error(Errc::InvalidSpec, "size must look like WxH, got '" + text + "'");
  const int w = parse_int(std::string_view(text).substr(0, x), "width");
  const int h = parse_int(std::string_view(text).substr(x + 1), "height");
  if (w < 1 || h < 1)
    throw Error(Errc::InvalidSpec, "size must be at least 1x1");
  return {w, h};
}

std::vector<int> parse_coeff_range(const std::string &text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos)
    return {parse_int(text, "coefficient count")};
  const int lo = parse_int(std::string_view(text).substr(0, dots), "range start");
  const int hi = parse_int(std::string_view(text).substr(dots + 2), "range end");
  if (lo > hi)
    throw Error(Errc::InvalidSpec, "empty coefficient range '" + text + "'");
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n)
    out.push_back(n);
  return out;
}

std::vector<int> parse_int_list(const std::string &text) {
  std::vector<int> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.push_back(parse_int(std::string_view(text).substr(start, comma - start), "list item"));
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  return out;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Face gender / age-group recognition with DCT or raw-pixel eigenspaces"};
  app.require_subcommand(1);

  TrainArgs train;
  auto *train_cmd = app.add_subcommand("train", "Fit a model on the train split of a manifest");
  train_cmd->add_option("manifest", train.manifest, "Manifest (path<TAB>label<TAB>split)")
      ->required();
  train_cmd->add_option("--out", train.out, "Model file to write")->required();
  train_cmd->add_option("--feature", train.feature, "raw or dct")->capture_default_str();
  train_cmd->add_option("--coeffs", train.coeffs, "DCT coefficient count")
      ->capture_default_str();
  train_cmd->add_option("--size", train.size, "Normalized image size WxH")
      ->capture_default_str();
  train_cmd->add_option("--components", train.components,
                        "Keep at most this many principal components (0 = all nonzero)");

  PredictArgs predict_args;
  auto *predict_cmd = app.add_subcommand("predict", "Classify one image");
  predict_cmd->add_option("model", predict_args.model)->required();
  predict_cmd->add_option("image", predict_args.image)->required();
  predict_cmd->add_option("--rule", predict_args.rule,
                          "knn<k> or centroid (default knn5, knn7 for 4 classes)");

  EvaluateArgs eval;
  auto *eval_cmd = app.add_subcommand("evaluate", "Score a model on a manifest's test split");
  eval_cmd->add_option("model", eval.model)->required();
  eval_cmd->add_option("manifest", eval.manifest)->required();
  eval_cmd->add_option("--rule", eval.rule,
                       "knn<k> or centroid (default knn5, knn7 for 4 classes)");
  eval_cmd->add_option("--out", eval.out, "Confusion matrix CSV to write");
  eval_cmd->add_option("--jobs", eval.jobs, "Worker threads")->check(CLI::PositiveNumber);

  SweepArgs sweep;
  auto *sweep_cmd = app.add_subcommand("sweep", "Recognition-rate grid over coefficients and rules");
  sweep_cmd->add_option("manifest", sweep.manifest)->required();
  sweep_cmd->add_option("--out", sweep.out, "Sweep CSV to write")->required();
  sweep_cmd->add_option("--feature", sweep.feature, "raw or dct")->capture_default_str();
  sweep_cmd->add_option("--coeffs", sweep.coeffs, "N or lo..hi")->capture_default_str();
  sweep_cmd->add_option("--k", sweep.k, "Comma-separated k values")->capture_default_str();
  sweep_cmd->add_flag("--centroid", sweep.centroid, "Also evaluate the cluster-centroid rule");
  sweep_cmd->add_option("--size", sweep.size, "Normalized image size WxH")
      ->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--confusion-dir", sweep.confusion_dir,
                        "Write one confusion CSV per cell into this directory");

  ExportArgs exp;
  auto *export_cmd =
      app.add_subcommand("export-eigenfaces", "Write eigenfaces and the mean face as PGM");
  export_cmd->add_option("model", exp.model)->required();
  export_cmd->add_option("--count", exp.count, "Number of eigenfaces")->capture_default_str();
  export_cmd->add_option("--out", exp.out, "Output directory")->required();

  SynthArgs synth;
  auto *synth_cmd = app.add_subcommand("synth", "Generate a synthetic labeled dataset");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--size", synth.size, "Image size WxH")->capture_default_str();
  synth_cmd->add_option("--classes", synth.spec.num_classes)->capture_default_str();
  synth_cmd->add_option("--train", synth.spec.train_per_class, "Training images per class")
      ->capture_default_str();
  synth_cmd->add_option("--test", synth.spec.test_per_class, "Test images per class")
      ->capture_default_str();
  synth_cmd->add_option("--contrast", synth.spec.contrast)->capture_default_str();
  synth_cmd->add_option("--noise", synth.spec.noise)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*train_cmd)
      cmd_train(train, out);
    else if (*predict_cmd)
      cmd_predict(predict_args, out);
    else if (*eval_cmd)
      cmd_evaluate(eval, out);
    else if (*sweep_cmd)
      cmd_sweep(sweep, out);
    else if (*export_cmd)
      cmd_export(exp, out);
    else if (*synth_cmd)
      cmd_synth(synth, out);
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace facerec::cli
