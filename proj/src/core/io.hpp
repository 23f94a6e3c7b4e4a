#pragma once

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "core/cotype.hpp"
#include "core/fourier.hpp"
#include "core/ldc.hpp"
#include "core/smoothing.hpp"
#include "core/tensor.hpp"

namespace cotypelab::io {

using json = nlohmann::json;

/// Provenance block embedded in every emitted artifact.  Rational payload
/// fields are bit-for-bit reproducible across runs; wall_ms is not.
struct Manifest {
    std::string command;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> inputs;  // name -> sha256 of payload
    double wall_ms = 0;
    std::vector<std::string> regime_flags;
    std::string arithmetic = "rational";
};

json manifest_to_json(const Manifest& m);

/// Parses text, translating parser failures into ParseError (with the byte
/// offset nlohmann reports).
json parse_text(const std::string& text);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& artifact);
std::string dump(const json& j);

/// SHA-256 of the artifact without its manifest block.
std::string payload_hash(json artifact);
void embed_manifest(json& artifact, const Manifest& m);

// ------------------------------------------------------------- schema bits
Rational get_rational(const json& j, const std::string& path);
int get_int(const json& j, const std::string& path);
const json& get_field(const json& obj, const char* key, const std::string& path);

// --------------------------------------------------------------- artifacts
json code_to_json(const ldc::BinaryCode& code);
ldc::BinaryCode code_from_json(const json& j);

json decoder_to_json(const ldc::LocalDecoder& dec);
ldc::LocalDecoder decoder_from_json(const json& j);

json quality_to_json(const ldc::QualityReport& rep);

json smoothed_to_json(const smoothing::SmoothedCode& sc);
smoothing::SmoothedCode smoothed_from_json(const json& j);

json tensor_to_json(const tensor::Tensor3<Rational>& T);
json tensor_to_json(const tensor::Tensor3<double>& T);

struct TensorFile {
    bool rational = true;
    tensor::Tensor3<Rational> exact;
    tensor::Tensor3<double> approx;
};
TensorFile tensor_from_json(const json& j);

json cube_to_json(const fourier::CubeFunction<Rational>& f);
json cube_to_json(const fourier::CubeFunction<double>& f);

struct CubeFile {
    bool rational = true;
    fourier::CubeFunction<Rational> exact;
    fourier::CubeFunction<double> approx;
};
CubeFile cube_from_json(const json& j);

json spec_to_json(const tensor::SpaceSpec& spec);

json norm_bounds_to_json(const tensor::UpperBound<Rational>& up, const tensor::LowerBound<Rational>& lo,
                         const tensor::SpaceSpec& spec);
json norm_bounds_to_json(const tensor::UpperBound<double>& up, const tensor::LowerBound<double>& lo,
                         const tensor::SpaceSpec& spec);

json certificate_to_json(const cotype::Certificate& cert);

/// One row per certificate, sorted by (m, q); header always present.
/// Columns: m,n,p1,p2,p3,q,J_min,alpha_min,value,runtime_ms.
std::string report_csv(const std::vector<json>& certificates);

}  // namespace cotypelab::io
