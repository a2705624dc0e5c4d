#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "loggrad/analysis.hpp"
#include "loggrad/dataset.hpp"
#include "loggrad/pgm.hpp"
#include "loggrad/preproc.hpp"

namespace py = pybind11;
using namespace loggrad;

namespace {

GrayImage gray_from_array(const py::array_t<uint16_t>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D uint16 array");
  GrayImage img(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  auto r = a.unchecked<2>();
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) img.at(y, x) = r(y, x);
  return img;
}

py::array_t<uint16_t> gray_to_array(const GrayImage& img) {
  py::array_t<uint16_t> a({img.height, img.width});
  auto w = a.mutable_unchecked<2>();
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) w(y, x) = img.at(y, x);
  return a;
}

py::array_t<double> doubles_to_array(const std::vector<double>& v, int h, int w) {
  py::array_t<double> a({h, w});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

QuantizerSpec spec_from_name(const std::string& preset) {
  if (preset == "1p5") return QuantizerSpec::preset_1p5bit();
  if (preset == "2p25") return QuantizerSpec::preset_2p25bit();
  throw py::value_error("preset must be '1p5' or '2p25'");
}

}  // namespace

PYBIND11_MODULE(_loggrad, m) {
  m.doc() = "log-gradient image pipeline (C++ core)";

  m.def("load_pgm", [](const std::string& path) { return gray_to_array(load_pgm(path)); },
        py::arg("path"));
  m.def(
      "save_pgm",
      [](const py::array_t<uint16_t>& img, const std::string& path, int bit_depth) {
        save_pgm(gray_from_array(img), path, bit_depth);
      },
      py::arg("image"), py::arg("path"), py::arg("bit_depth") = 16);

  m.def(
      "log_transform",
      [](const py::array_t<uint16_t>& img, double shift) {
        LogImage li = log_transform(gray_from_array(img), shift);
        return doubles_to_array(li.values, li.height, li.width);
      },
      py::arg("image"), py::arg("shift") = 1.0);

  m.def(
      "log_gradient",
      [](const py::array_t<double>& log_img) {
        if (log_img.ndim() != 2) throw py::value_error("expected a 2-D float array");
        LogImage li(static_cast<int>(log_img.shape(0)), static_cast<int>(log_img.shape(1)));
        std::copy(log_img.data(), log_img.data() + log_img.size(), li.values.begin());
        GradImage g = log_gradient(li);
        return doubles_to_array(g.values, g.height, g.width);
      },
      py::arg("log_image"));

  m.def(
      "quantize",
      [](const py::array_t<double>& grad, const std::string& preset) {
        QuantizerSpec spec = spec_from_name(preset);
        py::array_t<int> out({grad.shape(0), grad.shape(1)});
        const double* src = grad.data();
        int* dst = out.mutable_data();
        for (py::ssize_t i = 0; i < grad.size(); ++i) dst[i] = spec.apply(src[i]);
        return out;
      },
      py::arg("gradient"), py::arg("preset") = "1p5");

  m.def(
      "rdc_quantize",
      [](double a, double b, const std::string& preset, double shift) {
        return rdc_quantize(a, b, spec_from_name(preset), shift);
      },
      py::arg("a"), py::arg("b"), py::arg("preset") = "1p5", py::arg("shift") = 1.0);

  m.def(
      "gamma_encode",
      [](const py::array_t<uint16_t>& img, double gamma) {
        GrayImage g = gray_from_array(img);
        auto enc = gamma_encode(g, GammaSpec(gamma));
        py::array_t<uint8_t> out({g.height, g.width});
        std::copy(enc.begin(), enc.end(), out.mutable_data());
        return out;
      },
      py::arg("image"), py::arg("gamma") = 2.2);

  m.def(
      "prepare_input",
      [](const py::array_t<uint16_t>& img, const std::string& fmt) {
        Tensor t = prepare_input(gray_from_array(img), parse_input_format(fmt),
                                 QuantizerSpec::preset_1p5bit(), QuantizerSpec::preset_2p25bit(),
                                 GammaSpec());
        return doubles_to_array(t.data, static_cast<int>(t.shape[0]),
                                static_cast<int>(t.shape[1]));
      },
      py::arg("image"), py::arg("format"));

  m.def(
      "scale_brightness",
      [](const py::array_t<uint16_t>& img, double b) {
        return gray_to_array(scale_brightness(gray_from_array(img), BrightnessFactor(b)));
      },
      py::arg("image"), py::arg("b"));

  m.def(
      "demosaic_to_gray",
      [](const py::array_t<uint16_t>& mosaic) {
        if (mosaic.ndim() != 2) throw py::value_error("expected a 2-D uint16 array");
        BayerRaw raw(static_cast<int>(mosaic.shape(0)), static_cast<int>(mosaic.shape(1)));
        auto r = mosaic.unchecked<2>();
        for (int y = 0; y < raw.height; ++y)
          for (int x = 0; x < raw.width; ++x) raw.at(y, x) = r(y, x);
        return gray_to_array(demosaic_to_gray(raw));
      },
      py::arg("mosaic"));

  m.def(
      "synth_scene",
      [](int class_id, double illum, double noise_std, uint64_t seed, int resolution) {
        SynthParams p;
        p.resolution = resolution;
        p.noise_std = noise_std;
        return gray_to_array(synth_scene(class_id, BrightnessFactor(illum), p, seed));
      },
      py::arg("class_id"), py::arg("illum") = 1.0, py::arg("noise_std") = 8.0,
      py::arg("seed") = 0, py::arg("resolution") = 96);
}
