#include "cotypelab/lab.h"

#include <chrono>
#include <map>
#include <string>

#include "core/cotype.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/ldc.hpp"
#include "core/smoothing.hpp"
#include "core/tensor.hpp"
#include "core/verify.hpp"

using namespace cotypelab;

struct lab_result {
    std::map<std::string, std::string> artifacts;
    std::string message;
};

namespace {

using io::json;

struct Options {
    json raw = json::object();
    std::string command = "api";
    std::uint64_t seed = 0;

    bool flag(const char* key, bool dflt) const {
        if (!raw.contains(key)) return dflt;
        if (!raw[key].is_boolean()) throw SchemaError(std::string("options.") + key, "expected a bool");
        return raw[key].get<bool>();
    }
    std::uint64_t uint(const char* key, std::uint64_t dflt) const {
        if (!raw.contains(key)) return dflt;
        if (!raw[key].is_number()) throw SchemaError(std::string("options.") + key, "expected a number");
        return raw[key].get<std::uint64_t>();
    }
    std::string str(const char* key, const std::string& dflt) const {
        if (!raw.contains(key)) return dflt;
        if (!raw[key].is_string()) throw SchemaError(std::string("options.") + key, "expected a string");
        return raw[key].get<std::string>();
    }
};

Options parse_options(const char* options_json, const char* fallback_command) {
    Options opt;
    opt.command = std::string("api:") + fallback_command;
    if (options_json && *options_json) {
        opt.raw = io::parse_text(options_json);
        if (!opt.raw.is_object()) throw SchemaError("options", "expected a JSON object");
    }
    opt.command = opt.str("command", opt.command);
    opt.seed = opt.uint("seed", 0);
    return opt;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

io::Manifest make_manifest(const Options& opt, const Stopwatch& sw,
                           const std::map<std::string, std::string>& inputs,
                           std::vector<std::string> flags = {}) {
    io::Manifest m;
    m.command = opt.command;
    m.seed = opt.seed;
    m.inputs = inputs;
    m.wall_ms = sw.ms();
    m.regime_flags = std::move(flags);
    return m;
}

const char* require_arg(const char* p, const char* what) {
    if (!p) throw PreconditionError("capi", std::string("null argument: ") + what);
    return p;
}

template <class Fn>
lab_status_t guarded(lab_result_t** out, Fn&& fn) {
    if (!out) return LAB_ERR_NULL_ARGUMENT;
    auto* res = new lab_result();
    *out = res;
    try {
        fn(*res);
        return LAB_OK;
    } catch (const ParseError& e) {
        res->message = e.what();
        return LAB_ERR_PARSE;
    } catch (const SchemaError& e) {
        res->message = e.what();
        return LAB_ERR_SCHEMA;
    } catch (const BudgetError& e) {
        res->message = e.what();
        return LAB_ERR_BUDGET;
    } catch (const PreconditionError& e) {
        res->message = e.what();
        return LAB_ERR_PRECONDITION;
    } catch (const IoError& e) {
        res->message = e.what();
        return LAB_ERR_IO;
    } catch (const InvariantViolation& e) {
        res->message = e.what();
        return LAB_ERR_INVARIANT;
    } catch (const std::exception& e) {
        res->message = e.what();
        return LAB_ERR_UNKNOWN;
    } catch (...) {
        res->message = "unknown failure";
        return LAB_ERR_UNKNOWN;
    }
}

}  // namespace

extern "C" {

const char* lab_version(void) { return "0.1.0"; }

int lab_api_version(void) { return LAB_API_VERSION; }

const char* lab_status_name(lab_status_t status) {
    switch (status) {
        case LAB_OK: return "ok";
        case LAB_ERR_PRECONDITION: return "precondition";
        case LAB_ERR_INVARIANT: return "invariant";
        case LAB_ERR_PARSE: return "parse";
        case LAB_ERR_SCHEMA: return "schema";
        case LAB_ERR_BUDGET: return "budget";
        case LAB_ERR_IO: return "io";
        case LAB_ERR_NULL_ARGUMENT: return "null_argument";
        case LAB_ERR_UNKNOWN: return "unknown";
    }
    return "unknown";
}

const char* lab_result_artifact(const lab_result_t* result, const char* name) {
    if (!result || !name) return nullptr;
    auto it = result->artifacts.find(name);
    return it == result->artifacts.end() ? nullptr : it->second.c_str();
}

const char* lab_result_message(const lab_result_t* result) {
    return result ? result->message.c_str() : "";
}

void lab_result_free(lab_result_t* result) { delete result; }

lab_status_t lab_code_hadamard(int m, const char* options_json, lab_result_t** out) {
    return guarded(out, [&](lab_result& res) {
        Options opt = parse_options(options_json, "code_hadamard");
        Stopwatch sw;
        auto [code, dec] = ldc::hadamard_code(m);
        json cj = io::code_to_json(code);
        json dj = io::decoder_to_json(dec);
        io::Manifest man = make_manifest(opt, sw, {});
        io::embed_manifest(cj, man);
        io::embed_manifest(dj, man);
        res.artifacts["code"] = io::dump(cj);
        res.artifacts["decoder"] = io::dump(dj);
    });
}

lab_status_t lab_code_quality(const char* code_json, const char* decoder_json, const char* phi,
                              const char* mode, uint64_t budget, uint64_t samples,
                              const char* options_json, lab_result_t** out) {
    return guarded(out, [&](lab_result& res) {
        Options opt = parse_options(options_json, "code_quality");
        Stopwatch sw;
        json cj = io::parse_text(require_arg(code_json, "code_json"));
        json dj = io::parse_text(require_arg(decoder_json, "decoder_json"));
        ldc::BinaryCode code = io::code_from_json(cj);
        ldc::LocalDecoder dec = io::decoder_from_json(dj);
        Rational phi_r = parse_rational(require_arg(phi, "phi"), "phi");
        std::string mode_s = require_arg(mode, "mode");
        ldc::QualityMode qm;
        if (mode_s == "exhaustive")
            qm = ldc::QualityMode::Exhaustive;
        else if (mode_s == "sampled")
            qm = ldc::QualityMode::Sampled;
        else
            throw PreconditionError("ldc", "mode must be \"exhaustive\" or \"sampled\"");
        ldc::QualityReport rep = ldc::evaluate_quality(code, dec, phi_r, qm, budget, opt.seed, samples);
        json rj = io::quality_to_json(rep);
        std::vector<std::string> flags{rep.regime == ldc::QualityReport::Regime::Exhaustive
                                           ? "quality:exhaustive"
                                           : "quality:sampled-upper-bound-only"};
        io::Manifest man = make_manifest(
            opt, sw, {{"code", io::payload_hash(cj)}, {"decoder", io::payload_hash(dj)}}, flags);
        io::embed_manifest(rj, man);
        res.artifacts["quality"] = io::dump(rj);
    });
}

lab_status_t lab_smooth(const char* code_json, const char* decoder_json, const char* theta,
                        const char* phi, const char* options_json, lab_result_t** out) {
    return guarded(out, [&](lab_result& res) {
        Options opt = parse_options(options_json, "smooth");
        Stopwatch sw;
        json cj = io::parse_text(require_arg(code_json, "code_json"));
        json dj = io::parse_text(require_arg(decoder_json, "decoder_json"));
        ldc::BinaryCode code = io::code_from_json(cj);
        ldc::LocalDecoder dec = io::decoder_from_json(dj);
        Rational theta_r = parse_rational(require_arg(theta, "theta"), "theta");
        Rational phi_r = parse_rational(require_arg(phi, "phi"), "phi");
        std::vector<std::string> warnings;
        smoothing::SmoothedCode sc = smoothing::smooth(code, dec, theta_r, phi_r, warnings);
        json sj = io::smoothed_to_json(sc);
        io::Manifest man = make_manifest(
            opt, sw, {{"code", io::payload_hash(cj)}, {"decoder", io::payload_hash(dj)}}, warnings);
        io::embed_manifest(sj, man);
        res.artifacts["smoothed"] = io::dump(sj);
        for (const std::string& w : warnings) res.message += w + "\n";
    });
}

lab_status_t lab_tensor_norm(const char* tensor_json, const char* p1, const char* p2, const char* p3,
                             const char* options_json, lab_result_t** out) {
    return guarded(out, [&](lab_result& res) {
        Options opt = parse_options(options_json, "tensor_norm");
        Stopwatch sw;
        json tj = io::parse_text(require_arg(tensor_json, "tensor_json"));
        io::TensorFile tf = io::tensor_from_json(tj);
        bool exploratory = opt.flag("exploratory", false);
        int n = tf.rational ? tf.exact.n : tf.approx.n;
        tensor::SpaceSpec spec =
            tensor::SpaceSpec::make(tensor::Exponent::parse(require_arg(p1, "p1")),
                                    tensor::Exponent::parse(require_arg(p2, "p2")),
                                    tensor::Exponent::parse(require_arg(p3, "p3")), n, exploratory);
        tensor::UpperParams up;
        up.materialize = opt.flag("materialize", false);
        up.peel.seed = opt.seed;
        std::string lower = opt.str("lower", "best");
        json nj;
        auto run = [&](const auto& T) {
            using S = typename std::decay_t<decltype(T)>::value_type;
            auto upper = tensor::projective_upper<S>(T.tensor, spec, up);
            tensor::PeelParams asc;
            asc.seed = opt.seed ^ 0x77ull;
            tensor::LowerBound<S> lo;
            if (lower == "best")
                lo = tensor::dual_lower_best<S>(T.tensor, spec, true, asc);
            else
                lo = tensor::dual_lower<S>(T.tensor, spec, tensor::parse_lower_method(lower), asc);
            nj = io::norm_bounds_to_json(upper, lo, spec);
        };
        struct RationalT {
            using value_type = Rational;
            const tensor::Tensor3<Rational>& tensor;
        };
        struct FloatT {
            using value_type = double;
            const tensor::Tensor3<double>& tensor;
        };
        if (tf.rational)
            run(RationalT{tf.exact});
        else
            run(FloatT{tf.approx});
        io::Manifest man = make_manifest(opt, sw, {{"tensor", io::payload_hash(tj)}});
        man.arithmetic = tf.rational ? "rational" : "float";
        io::embed_manifest(nj, man);
        res.artifacts["norm"] = io::dump(nj);
    });
}

lab_status_t lab_certify(const char* smoothed_json, const char* p1, const char* p2, const char* p3,
                         const char* q, const char* theta, const char* options_json,
                         lab_result_t** out) {
    return guarded(out, [&](lab_result& res) {
        Options opt = parse_options(options_json, "certify");
        Stopwatch sw;
        json sj = io::parse_text(require_arg(smoothed_json, "smoothed_json"));
        smoothing::SmoothedCode sc = io::smoothed_from_json(sj);
        tensor::SpaceSpec spec = tensor::SpaceSpec::make(
            tensor::Exponent::parse(require_arg(p1, "p1")), tensor::Exponent::parse(require_arg(p2, "p2")),
            tensor::Exponent::parse(require_arg(p3, "p3")), sc.three_n());
        Rational q_r = parse_rational(require_arg(q, "q"), "q");
        Rational theta_r = (theta && *theta) ? parse_rational(theta, "theta") : sc.theta;

        cotype::CertifyOptions copt;
        copt.rad.use_projective = opt.flag("u_projective", true);
        copt.rad.use_averaging = opt.flag("u_averaging", true);
        copt.witness_lower_entry = opt.flag("witness_entry", true);
        copt.witness_lower_diagonal = opt.flag("witness_diagonal", true);
        copt.witness_lower_ascent = opt.flag("witness_ascent", false);
        copt.seed = opt.seed;

        std::string input_hash = io::payload_hash(sj);
        cotype::Certificate cert = cotype::certify(sc, spec, q_r, theta_r, copt, input_hash);
        json cj = io::certificate_to_json(cert);
        io::Manifest man = make_manifest(opt, sw, {{"smoothed", input_hash}}, cert.warnings);
        io::embed_manifest(cj, man);
        res.artifacts["certificate"] = io::dump(cj);
        for (const std::string& w : cert.warnings) res.message += w + "\n";
    });
}

lab_status_t lab_verify_suite(const char* suite, const char* options_json, lab_result_t** out) {
    return guarded(out, [&](lab_result& res) {
        Options opt = parse_options(options_json, "verify");
        Stopwatch sw;
        int cases = static_cast<int>(opt.uint("cases", 100));
        verify::SuiteReport rep = verify::run_suite(require_arg(suite, "suite"), opt.seed, cases);
        json vj;
        vj["suite"] = rep.suite;
        vj["cases"] = rep.cases;
        vj["failures"] = rep.failures;
        vj["messages"] = rep.messages;
        vj["pass"] = rep.pass();
        io::Manifest man = make_manifest(opt, sw, {});
        io::embed_manifest(vj, man);
        res.artifacts["verify"] = io::dump(vj);
        if (!rep.pass()) res.message = "suite reported " + std::to_string(rep.failures) + " failures";
    });
}

lab_status_t lab_report_csv(const char* const* certificate_jsons, size_t count,
                            const char* options_json, lab_result_t** out) {
    return guarded(out, [&](lab_result& res) {
        parse_options(options_json, "report");
        std::vector<io::json> certs;
        for (size_t i = 0; i < count; ++i)
            certs.push_back(io::parse_text(require_arg(certificate_jsons[i], "certificate_jsons[i]")));
        res.artifacts["csv"] = io::report_csv(certs);
    });
}

}  // extern "C"
