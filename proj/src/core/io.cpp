#include "core/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "core/sha256.hpp"

namespace cotypelab::io {

json manifest_to_json(const Manifest& m) {
    json j;
    j["command"] = m.command;
    j["seed"] = m.seed;
    j["inputs"] = m.inputs;
    j["wall_ms"] = m.wall_ms;
    j["regime_flags"] = m.regime_flags;
    j["arithmetic"] = m.arithmetic;
    j["tool"] = "cotypelab";
    j["version"] = "0.1.0";
    return j;
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.byte, e.what());
    }
}

json load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void save_file(const std::string& path, const json& artifact) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << dump(artifact);
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string payload_hash(json artifact) {
    artifact.erase("manifest");
    return sha256_hex(artifact.dump());
}

void embed_manifest(json& artifact, const Manifest& m) { artifact["manifest"] = manifest_to_json(m); }

// ------------------------------------------------------------- schema bits

const json& get_field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "." + key, "missing field");
    return *it;
}

Rational get_rational(const json& j, const std::string& path) {
    if (j.is_string()) return parse_rational(j.get<std::string>(), path);
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw SchemaError(path, "expected a rational (\"p/q\" string or integer)");
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<int>();
}

namespace {

std::string get_str(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

Sign get_sign(const json& j, const std::string& path) {
    int v = get_int(j, path);
    if (v != 1 && v != -1) throw SchemaError(path, "expected -1 or +1");
    return static_cast<Sign>(v);
}

const json& get_array(const json& obj, const char* key, const std::string& path, std::size_t len = 0) {
    const json& a = get_field(obj, key, path);
    if (!a.is_array()) throw SchemaError(path + "." + key, "expected an array");
    if (len && a.size() != len)
        throw SchemaError(path + "." + key,
                          "expected " + std::to_string(len) + " entries, found " +
                              std::to_string(a.size()));
    return a;
}

}  // namespace

// --------------------------------------------------------------------- code

json code_to_json(const ldc::BinaryCode& code) {
    json j;
    j["m"] = code.m;
    j["n"] = code.n;
    j["form"] = code.form == ldc::BinaryCode::Form::Walsh ? "walsh" : "explicit";
    if (code.form == ldc::BinaryCode::Form::Explicit) {
        json rows = json::array();
        for (const auto& w : code.codewords) rows.push_back(std::vector<int>(w.begin(), w.end()));
        j["codewords"] = std::move(rows);
    }
    return j;
}

ldc::BinaryCode code_from_json(const json& j) {
    ldc::BinaryCode code;
    code.m = get_int(get_field(j, "m", "code"), "code.m");
    code.n = get_int(get_field(j, "n", "code"), "code.n");
    std::string form = get_str(get_field(j, "form", "code"), "code.form");
    if (form == "walsh") {
        code.form = ldc::BinaryCode::Form::Walsh;
    } else if (form == "explicit") {
        code.form = ldc::BinaryCode::Form::Explicit;
        const json& rows = get_array(j, "codewords", "code");
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const std::string path = "code.codewords[" + std::to_string(r) + "]";
            if (!rows[r].is_array()) throw SchemaError(path, "expected an array");
            ldc::Word w;
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                w.push_back(get_sign(rows[r][c], path + "[" + std::to_string(c) + "]"));
            code.codewords.push_back(std::move(w));
        }
    } else {
        throw SchemaError("code.form", "expected \"explicit\" or \"walsh\"");
    }
    code.validate();
    return code;
}

// ------------------------------------------------------------------ decoder

json decoder_to_json(const ldc::LocalDecoder& dec) {
    json j;
    j["m"] = dec.m;
    j["n"] = dec.n;
    json bits = json::array();
    for (const auto& queries : dec.per_bit) {
        json qs = json::array();
        for (const auto& wq : queries) {
            json q;
            q["i"] = wq.query.i;
            q["j"] = wq.query.j;
            q["k"] = wq.query.k;
            q["g"] = std::vector<int>(wq.query.g.begin(), wq.query.g.end());
            q["w"] = format_rational(wq.weight);
            qs.push_back(std::move(q));
        }
        bits.push_back(std::move(qs));
    }
    j["per_bit"] = std::move(bits);
    return j;
}

ldc::LocalDecoder decoder_from_json(const json& j) {
    ldc::LocalDecoder dec;
    dec.m = get_int(get_field(j, "m", "decoder"), "decoder.m");
    dec.n = get_int(get_field(j, "n", "decoder"), "decoder.n");
    const json& bits = get_array(j, "per_bit", "decoder");
    for (std::size_t t = 0; t < bits.size(); ++t) {
        const std::string bpath = "decoder.per_bit[" + std::to_string(t) + "]";
        if (!bits[t].is_array()) throw SchemaError(bpath, "expected an array");
        std::vector<ldc::WeightedQuery> queries;
        for (std::size_t qi = 0; qi < bits[t].size(); ++qi) {
            const std::string qpath = bpath + "[" + std::to_string(qi) + "]";
            const json& q = bits[t][qi];
            ldc::WeightedQuery wq;
            wq.query.i = get_int(get_field(q, "i", qpath), qpath + ".i");
            wq.query.j = get_int(get_field(q, "j", qpath), qpath + ".j");
            wq.query.k = get_int(get_field(q, "k", qpath), qpath + ".k");
            const json& g = get_array(q, "g", qpath, 8);
            for (int b = 0; b < 8; ++b)
                wq.query.g[b] = get_sign(g[b], qpath + ".g[" + std::to_string(b) + "]");
            wq.weight = get_rational(get_field(q, "w", qpath), qpath + ".w");
            queries.push_back(std::move(wq));
        }
        dec.per_bit.push_back(std::move(queries));
    }
    dec.validate();
    return dec;
}

// ------------------------------------------------------------------ quality

json quality_to_json(const ldc::QualityReport& rep) {
    json j;
    j["phi"] = format_rational(rep.phi);
    j["theta_margin"] = format_rational(rep.theta_margin);
    j["regime"] = rep.regime == ldc::QualityReport::Regime::Exhaustive ? "exhaustive" : "sampled";
    j["tested_count"] = rep.tested_count;
    j["seed"] = rep.seed;
    json worst;
    worst["bit"] = rep.worst_bit;
    worst["message_index"] = rep.worst_message;
    worst["flips"] = rep.worst_flips;
    j["worst"] = std::move(worst);
    return j;
}

// ----------------------------------------------------------------- smoothed

json smoothed_to_json(const smoothing::SmoothedCode& sc) {
    json j;
    j["m"] = sc.m();
    j["n"] = sc.n();
    j["three_n"] = sc.three_n();
    j["theta"] = format_rational(sc.theta);
    j["phi"] = format_rational(sc.phi);
    j["code"] = code_to_json(sc.padded.inner);
    json bits = json::array();
    for (const auto& b : sc.bits) {
        json e;
        e["pi"] = b.pi;
        e["sigma"] = b.sigma;
        e["tau"] = b.tau;
        e["signs"] = std::vector<int>(b.signs.begin(), b.signs.end());
        e["J"] = b.J;
        json biases = json::array();
        for (const auto& p : b.biases) biases.push_back(format_rational(p));
        e["biases"] = std::move(biases);
        bits.push_back(std::move(e));
    }
    j["per_bit"] = std::move(bits);
    return j;
}

smoothing::SmoothedCode smoothed_from_json(const json& j) {
    smoothing::SmoothedCode sc;
    sc.padded.inner = code_from_json(get_field(j, "code", "smoothed"));
    sc.theta = get_rational(get_field(j, "theta", "smoothed"), "smoothed.theta");
    sc.phi = get_rational(get_field(j, "phi", "smoothed"), "smoothed.phi");
    const int N = sc.three_n();
    if (get_int(get_field(j, "m", "smoothed"), "smoothed.m") != sc.m())
        throw SchemaError("smoothed.m", "inconsistent with the embedded code");
    if (get_int(get_field(j, "n", "smoothed"), "smoothed.n") != sc.n())
        throw SchemaError("smoothed.n", "inconsistent with the embedded code");
    if (get_int(get_field(j, "three_n", "smoothed"), "smoothed.three_n") != N)
        throw SchemaError("smoothed.three_n", "expected 3n");
    const json& bits = get_array(j, "per_bit", "smoothed", sc.m());
    for (std::size_t t = 0; t < bits.size(); ++t) {
        const std::string bpath = "smoothed.per_bit[" + std::to_string(t) + "]";
        const json& e = bits[t];
        smoothing::SmoothedCode::PerBit pb;
        pb.J = get_int(get_field(e, "J", bpath), bpath + ".J");
        for (const char* key : {"pi", "sigma", "tau"}) {
            const json& arr = get_array(e, key, bpath, N);
            std::vector<int> perm;
            for (std::size_t i = 0; i < arr.size(); ++i)
                perm.push_back(get_int(arr[i], bpath + "." + key + "[" + std::to_string(i) + "]"));
            if (key[0] == 'p')
                pb.pi = std::move(perm);
            else if (key[0] == 's')
                pb.sigma = std::move(perm);
            else
                pb.tau = std::move(perm);
        }
        const json& signs = get_array(e, "signs", bpath, pb.J);
        for (std::size_t i = 0; i < signs.size(); ++i)
            pb.signs.push_back(get_sign(signs[i], bpath + ".signs[" + std::to_string(i) + "]"));
        const json& biases = get_array(e, "biases", bpath, pb.J);
        for (std::size_t i = 0; i < biases.size(); ++i)
            pb.biases.push_back(get_rational(biases[i], bpath + ".biases[" + std::to_string(i) + "]"));
        sc.bits.push_back(std::move(pb));
    }
    sc.validate();
    return sc;
}

// ------------------------------------------------------------------ tensors

json tensor_to_json(const tensor::Tensor3<Rational>& T) {
    json j;
    j["n"] = T.n;
    j["order"] = "ijk-row-major-k-fastest";
    j["arithmetic"] = "rational";
    json entries = json::array();
    for (const Rational& v : T.e) entries.push_back(format_rational(v));
    j["entries"] = std::move(entries);
    return j;
}

json tensor_to_json(const tensor::Tensor3<double>& T) {
    json j;
    j["n"] = T.n;
    j["order"] = "ijk-row-major-k-fastest";
    j["arithmetic"] = "float";
    j["entries"] = T.e;
    return j;
}

TensorFile tensor_from_json(const json& j) {
    TensorFile tf;
    int n = get_int(get_field(j, "n", "tensor"), "tensor.n");
    if (j.contains("order") && get_str(j["order"], "tensor.order") != "ijk-row-major-k-fastest")
        throw SchemaError("tensor.order", "unsupported entry order");
    std::string arith = get_str(get_field(j, "arithmetic", "tensor"), "tensor.arithmetic");
    const json& entries = get_array(j, "entries", "tensor",
                                    static_cast<std::size_t>(n) * n * n);
    if (arith == "rational") {
        tf.rational = true;
        tf.exact = tensor::Tensor3<Rational>::zeros(n);
        for (std::size_t i = 0; i < entries.size(); ++i)
            tf.exact.e[i] = get_rational(entries[i], "tensor.entries[" + std::to_string(i) + "]");
    } else if (arith == "float") {
        tf.rational = false;
        tf.approx = tensor::Tensor3<double>::zeros(n);
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (!entries[i].is_number())
                throw SchemaError("tensor.entries[" + std::to_string(i) + "]", "expected a number");
            tf.approx.e[i] = entries[i].get<double>();
        }
    } else {
        throw SchemaError("tensor.arithmetic", "expected \"rational\" or \"float\"");
    }
    return tf;
}

// ----------------------------------------------------------- cube functions

json cube_to_json(const fourier::CubeFunction<Rational>& f) {
    json j;
    j["m"] = f.m;
    j["d"] = f.d;
    j["arithmetic"] = "rational";
    json rows = json::array();
    for (std::uint64_t idx = 0; idx < f.rows(); ++idx) {
        json row = json::array();
        for (int c = 0; c < f.d; ++c) row.push_back(format_rational(f.row(idx)[c]));
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    return j;
}

json cube_to_json(const fourier::CubeFunction<double>& f) {
    json j;
    j["m"] = f.m;
    j["d"] = f.d;
    j["arithmetic"] = "float";
    json rows = json::array();
    for (std::uint64_t idx = 0; idx < f.rows(); ++idx) {
        json row = json::array();
        for (int c = 0; c < f.d; ++c) row.push_back(f.row(idx)[c]);
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    return j;
}

CubeFile cube_from_json(const json& j) {
    CubeFile cf;
    int m = get_int(get_field(j, "m", "cube"), "cube.m");
    int d = get_int(get_field(j, "d", "cube"), "cube.d");
    std::string arith = get_str(get_field(j, "arithmetic", "cube"), "cube.arithmetic");
    const json& rows = get_array(j, "values", "cube", std::size_t(1) << m);
    cf.rational = arith == "rational";
    if (arith != "rational" && arith != "float")
        throw SchemaError("cube.arithmetic", "expected \"rational\" or \"float\"");
    if (cf.rational)
        cf.exact = fourier::CubeFunction<Rational>::zero(m, d);
    else
        cf.approx = fourier::CubeFunction<double>::zero(m, d);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string rpath = "cube.values[" + std::to_string(r) + "]";
        if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(d))
            throw SchemaError(rpath, "expected an array of d entries");
        for (int c = 0; c < d; ++c) {
            if (cf.rational)
                cf.exact.row(r)[c] = get_rational(rows[r][c], rpath + "[" + std::to_string(c) + "]");
            else
                cf.approx.row(r)[c] = rows[r][c].get<double>();
        }
    }
    return cf;
}

// --------------------------------------------------------------- norm bound

json spec_to_json(const tensor::SpaceSpec& spec) {
    json j;
    j["p"] = {spec.p1.str(), spec.p2.str(), spec.p3.str()};
    j["n"] = spec.n;
    j["inv_r"] = format_rational(spec.inv_r());
    return j;
}

namespace {

template <class S>
json terms_to_json(const std::vector<tensor::RankOneTerm<S>>& terms) {
    json out = json::array();
    for (const auto& t : terms) {
        json e;
        if constexpr (std::is_same_v<S, Rational>) {
            e["coeff"] = format_rational(t.coeff);
            auto vec = [](const std::vector<Rational>& v) {
                json a = json::array();
                for (const auto& x : v) a.push_back(format_rational(x));
                return a;
            };
            e["a"] = vec(t.a);
            e["b"] = vec(t.b);
            e["c"] = vec(t.c);
        } else {
            e["coeff"] = t.coeff;
            e["a"] = t.a;
            e["b"] = t.b;
            e["c"] = t.c;
        }
        out.push_back(std::move(e));
    }
    return out;
}

template <class S>
json bounds_to_json_impl(const tensor::UpperBound<S>& up, const tensor::LowerBound<S>& lo,
                         const tensor::SpaceSpec& spec) {
    json j;
    j["spec"] = spec_to_json(spec);
    json u;
    u["side"] = "upper";
    u["method"] = up.method;
    if constexpr (std::is_same_v<S, Rational>) {
        u["value"] = up.value.to_double();
        u["exact"] = up.value.to_string();
    } else {
        u["value"] = up.value;
    }
    json ucert;
    if (up.materialized)
        ucert["terms"] = terms_to_json(up.terms);
    else
        ucert["closed_form"] = up.method;
    u["certificate"] = std::move(ucert);

    json l;
    l["side"] = "lower";
    l["method"] = lo.method;
    if constexpr (std::is_same_v<S, Rational>) {
        l["value"] = lo.value.to_double();
        l["exact"] = lo.value.to_string();
    } else {
        l["value"] = lo.value;
    }
    json lcert;
    lcert["functional"] = lo.method;
    if (!lo.note.empty()) lcert["note"] = lo.note;
    if (!lo.u.empty()) {
        if constexpr (std::is_same_v<S, Rational>) {
            auto vec = [](const std::vector<Rational>& v) {
                json a = json::array();
                for (const auto& x : v) a.push_back(format_rational(x));
                return a;
            };
            lcert["u"] = vec(lo.u);
            lcert["v"] = vec(lo.v);
            lcert["w"] = vec(lo.w);
        } else {
            lcert["u"] = lo.u;
            lcert["v"] = lo.v;
            lcert["w"] = lo.w;
        }
    }
    l["certificate"] = std::move(lcert);

    j["upper"] = std::move(u);
    j["lower"] = std::move(l);
    return j;
}

}  // namespace

json norm_bounds_to_json(const tensor::UpperBound<Rational>& up, const tensor::LowerBound<Rational>& lo,
                         const tensor::SpaceSpec& spec) {
    return bounds_to_json_impl(up, lo, spec);
}

json norm_bounds_to_json(const tensor::UpperBound<double>& up, const tensor::LowerBound<double>& lo,
                         const tensor::SpaceSpec& spec) {
    return bounds_to_json_impl(up, lo, spec);
}

// -------------------------------------------------------------- certificate

json certificate_to_json(const cotype::Certificate& cert) {
    json j;
    j["q"] = format_rational(cert.q);
    j["spec"] = spec_to_json(cert.spec);
    j["m"] = cert.m;
    j["n"] = cert.n;
    j["theta"] = format_rational(cert.theta);
    j["phi"] = format_rational(cert.phi);
    j["alpha_min"] = format_rational(cert.alpha_min);
    j["alpha_threshold"] = format_rational(cert.alpha_threshold);
    j["j_min"] = cert.j_min;
    json pw = json::array();
    for (const auto& w : cert.per_witness) {
        json e;
        e["L"] = w.L.is_rational() ? format_rational(w.L.to_rational()) : w.L.to_string();
        e["L_float"] = w.L.to_double();
        e["method"] = w.method;
        e["alpha"] = format_rational(w.alpha);
        e["J"] = w.J;
        pw.push_back(std::move(e));
    }
    j["per_witness"] = std::move(pw);
    json ps = json::array();
    for (const auto& s : cert.per_sign) {
        json e;
        e["U"] = s.U.to_double();
        e["U_exact"] = s.U.is_rational() ? format_rational(s.U.to_rational()) : s.U.to_string();
        e["method"] = s.method;
        ps.push_back(std::move(e));
    }
    j["per_sign"] = std::move(ps);
    j["numerator_qth"] = cert.numerator_qth.to_string();
    j["denominator_sq"] = cert.denominator_sq.to_string();
    j["value"] = cert.value;
    j["inputs_hash"] = cert.inputs_hash;
    j["warnings"] = cert.warnings;
    return j;
}

// ---------------------------------------------------------------- CSV report

std::string report_csv(const std::vector<json>& certificates) {
    struct Row {
        Rational q;
        int m;
        json data;
        std::string line;
    };
    std::vector<Row> rows;
    for (std::size_t i = 0; i < certificates.size(); ++i) {
        const json& c = certificates[i];
        const std::string path = "certificate[" + std::to_string(i) + "]";
        int m = get_int(get_field(c, "m", path), path + ".m");
        int n = get_int(get_field(c, "n", path), path + ".n");
        Rational q = get_rational(get_field(c, "q", path), path + ".q");
        const json& spec = get_field(c, "spec", path);
        const json& p = get_array(spec, "p", path + ".spec", 3);
        int jmin = get_int(get_field(c, "j_min", path), path + ".j_min");
        Rational alpha = get_rational(get_field(c, "alpha_min", path), path + ".alpha_min");
        const json& val = get_field(c, "value", path);
        if (!val.is_number()) throw SchemaError(path + ".value", "expected a number");
        double runtime = 0;
        if (c.contains("manifest") && c["manifest"].contains("wall_ms") &&
            c["manifest"]["wall_ms"].is_number())
            runtime = c["manifest"]["wall_ms"].get<double>();
        std::ostringstream line;
        line << m << "," << n << "," << p[0].get<std::string>() << "," << p[1].get<std::string>()
             << "," << p[2].get<std::string>() << "," << format_rational(q) << "," << jmin << ","
             << format_rational(alpha) << "," << val.get<double>() << "," << runtime;
        rows.push_back({q, m, c, line.str()});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.m != b.m) return a.m < b.m;
        return a.q < b.q;
    });
    std::ostringstream out;
    out << "m,n,p1,p2,p3,q,J_min,alpha_min,value,runtime_ms\n";
    for (const Row& r : rows) out << r.line << "\n";
    return out.str();
}

}  // namespace cotypelab::io
