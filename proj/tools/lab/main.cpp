// lab: command-line front end over the cotypelab C API.
//
// Subcommands: code hadamard | code quality | smooth | tensor norm |
// certify | verify | report.  Exit codes: 0 success, 1 precondition or
// input refusal, 2 internal invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <vector>

#include "cotypelab/lab.h"

namespace {

using nlohmann::json;

struct ResultDeleter {
    void operator()(lab_result_t* r) const { lab_result_free(r); }
};
using Result = std::unique_ptr<lab_result_t, ResultDeleter>;

int exit_code_for(lab_status_t s) {
    if (s == LAB_OK) return 0;
    return s == LAB_ERR_INVARIANT ? 2 : 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "lab: cannot open '" << path << "' for reading\n";
        std::exit(1);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "lab: cannot open '" << path << "' for writing\n";
        std::exit(1);
    }
    out << text;
}

void emit(const std::string& out_path, const char* text) {
    if (out_path.empty())
        std::cout << text;
    else
        write_file(out_path, text);
}

struct Common {
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string arithmetic = "rational";
    std::string command_line;

    std::uint64_t effective_seed() const {
        if (seed_set) return seed;
        if (const char* env = std::getenv("LAB_SEED")) return std::strtoull(env, nullptr, 10);
        return 0;
    }
    json options() const {
        json o;
        o["command"] = command_line;
        o["seed"] = effective_seed();
        return o;
    }
};

/// Prints diagnostics and returns the process exit code for a finished call.
int finish(lab_status_t status, const Result& res) {
    const char* msg = lab_result_message(res.get());
    if (status != LAB_OK) {
        std::cerr << "lab: error (" << lab_status_name(status) << "): " << msg << "\n";
    } else if (msg && *msg) {
        std::cerr << msg;
    }
    return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cotypelab: locally decodable codes, tensor norm certificates, cotype lower bounds"};
    app.require_subcommand(1);

    Common common;
    {
        std::ostringstream cmd;
        for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
        common.command_line = cmd.str();
    }
    app.add_option("--seed", common.seed, "64-bit seed for all randomized stages (env LAB_SEED)")
        ->each([&](const std::string&) { common.seed_set = true; });
    app.add_option("--arithmetic", common.arithmetic, "rational|float (declares the required mode)")
        ->check(CLI::IsMember({"rational", "float"}));

    // ------------------------------------------------------------- lab code
    auto* code = app.add_subcommand("code", "build codes and evaluate decoding quality");
    code->require_subcommand(1);

    auto* hadamard = code->add_subcommand("hadamard", "Walsh-character code with its 3-query decoder");
    int had_m = 3;
    std::string had_out, had_dec_out;
    hadamard->add_option("--m", had_m, "message length")->required();
    hadamard->add_option("-o,--output", had_out, "code JSON path")->required();
    hadamard->add_option("--decoder-out", had_dec_out, "decoder JSON path (default: derived from -o)");

    auto* quality = code->add_subcommand("quality", "exact or sampled decoding-quality report");
    std::string q_code, q_dec, q_phi, q_mode = "exhaustive", q_out;
    std::uint64_t q_budget = 1ull << 24, q_samples = 0;
    quality->add_option("--code", q_code)->required();
    quality->add_option("--decoder", q_dec)->required();
    quality->add_option("--phi", q_phi, "corruption fraction, e.g. 1/8")->required();
    quality->add_option("--mode", q_mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
    quality->add_option("--budget", q_budget, "max exhaustive case count");
    quality->add_option("--samples", q_samples, "draws in sampled mode");
    quality->add_option("-o,--output", q_out, "report path (stdout when omitted)");

    // ------------------------------------------------------------ lab smooth
    auto* smooth = app.add_subcommand("smooth", "pad a code and pack disjoint decoding triples");
    std::string s_code, s_dec, s_theta, s_phi, s_out;
    smooth->add_option("--code", s_code)->required();
    smooth->add_option("--decoder", s_dec)->required();
    smooth->add_option("--theta", s_theta, "decoder advantage, e.g. 1/16")->required();
    smooth->add_option("--phi", s_phi, "corruption fraction, e.g. 1/16")->required();
    smooth->add_option("-o,--output", s_out)->required();

    // ------------------------------------------------------------ lab tensor
    auto* tensor_cmd = app.add_subcommand("tensor", "projective tensor norm bounds");
    tensor_cmd->require_subcommand(1);
    auto* norm = tensor_cmd->add_subcommand("norm", "certified upper and lower bounds");
    std::string t_file, t_lower = "best", t_out;
    std::vector<std::string> t_p;
    bool t_materialize = false, t_exploratory = false;
    norm->add_option("--file", t_file, "tensor JSON")->required();
    norm->add_option("--p", t_p, "three lp exponents, e.g. --p 3 3 3 (inf allowed)")
        ->expected(3)
        ->required();
    norm->add_option("--lower", t_lower,
                     "rank_one_ascent|diagonal_functional|entry_functional|best");
    norm->add_flag("--materialize", t_materialize, "include the full decomposition certificate");
    norm->add_flag("--exploratory", t_exploratory, "skip the 1/p1+1/p2+1/p3 <= 1 check");
    norm->add_option("-o,--output", t_out, "bound report path (stdout when omitted)");

    // ----------------------------------------------------------- lab certify
    auto* certify = app.add_subcommand("certify", "cotype-q lower-bound certificate");
    std::string c_smoothed, c_q, c_theta, c_out;
    std::vector<std::string> c_p;
    bool c_no_uproj = false, c_no_uavg = false, c_ascent = false;
    bool c_no_wentry = false, c_no_wdiag = false;
    certify->add_option("--smoothed", c_smoothed)->required();
    certify->add_option("--p", c_p, "three lp exponents")->expected(3)->required();
    certify->add_option("--q", c_q, "cotype exponent, q >= 2")->required();
    certify->add_option("--theta", c_theta, "override the theta recorded in the smoothed artifact");
    certify->add_flag("--no-u-projective", c_no_uproj, "skip projective upper bounds for U(eps)");
    certify->add_flag("--no-u-averaging", c_no_uavg, "skip the sign-averaging bound for U(eps)");
    certify->add_flag("--no-witness-entry", c_no_wentry);
    certify->add_flag("--no-witness-diagonal", c_no_wdiag);
    certify->add_flag("--witness-ascent", c_ascent, "also run the ascent lower bound per witness");
    certify->add_option("-o,--output", c_out)->required();

    // ------------------------------------------------------------ lab verify
    auto* verify = app.add_subcommand("verify", "built-in self-check suites");
    std::string v_suite, v_out;
    std::uint64_t v_cases = 100;
    verify->add_option("--suite", v_suite, "identities|symmetrization|sandwich")->required();
    verify->add_option("--cases", v_cases, "randomized cases");
    verify->add_option("-o,--output", v_out, "report path (stdout when omitted)");

    // ------------------------------------------------------------ lab report
    auto* report = app.add_subcommand("report", "CSV summary of certificates");
    std::string r_out;
    std::vector<std::string> r_inputs;
    report->add_option("-o,--output", r_out, "CSV path (stdout when omitted)");
    report->add_option("inputs", r_inputs, "certificate JSON files")->required();

    CLI11_PARSE(app, argc, argv);

    lab_result_t* raw = nullptr;
    lab_status_t status = LAB_OK;
    Result res;

    if (hadamard->parsed()) {
        status = lab_code_hadamard(had_m, common.options().dump().c_str(), &raw);
        res.reset(raw);
        if (status == LAB_OK) {
            write_file(had_out, lab_result_artifact(res.get(), "code"));
            if (had_dec_out.empty()) {
                had_dec_out = had_out;
                auto pos = had_dec_out.rfind(".json");
                if (pos != std::string::npos)
                    had_dec_out.replace(pos, 5, ".decoder.json");
                else
                    had_dec_out += ".decoder.json";
            }
            write_file(had_dec_out, lab_result_artifact(res.get(), "decoder"));
        }
        return finish(status, res);
    }

    if (quality->parsed()) {
        std::string cj = read_file(q_code), dj = read_file(q_dec);
        status = lab_code_quality(cj.c_str(), dj.c_str(), q_phi.c_str(), q_mode.c_str(), q_budget,
                                  q_samples, common.options().dump().c_str(), &raw);
        res.reset(raw);
        if (status == LAB_OK) emit(q_out, lab_result_artifact(res.get(), "quality"));
        return finish(status, res);
    }

    if (smooth->parsed()) {
        std::string cj = read_file(s_code), dj = read_file(s_dec);
        status = lab_smooth(cj.c_str(), dj.c_str(), s_theta.c_str(), s_phi.c_str(),
                            common.options().dump().c_str(), &raw);
        res.reset(raw);
        if (status == LAB_OK) write_file(s_out, lab_result_artifact(res.get(), "smoothed"));
        return finish(status, res);
    }

    if (norm->parsed()) {
        std::string tj = read_file(t_file);
        // The global --arithmetic flag declares what the pipeline expects;
        // a mismatching tensor file is refused rather than converted.
        try {
            json parsed = json::parse(tj);
            if (parsed.contains("arithmetic") && parsed["arithmetic"].is_string() &&
                parsed["arithmetic"].get<std::string>() != common.arithmetic) {
                std::cerr << "lab: error (precondition): tensor file uses "
                          << parsed["arithmetic"].get<std::string>() << " arithmetic but --arithmetic "
                          << common.arithmetic << " was requested\n";
                return 1;
            }
        } catch (const json::parse_error&) {
            // fall through; the C API reports the parse error with its byte offset
        }
        json opts = common.options();
        opts["lower"] = t_lower;
        opts["materialize"] = t_materialize;
        opts["exploratory"] = t_exploratory;
        status = lab_tensor_norm(tj.c_str(), t_p[0].c_str(), t_p[1].c_str(), t_p[2].c_str(),
                                 opts.dump().c_str(), &raw);
        res.reset(raw);
        if (status == LAB_OK) emit(t_out, lab_result_artifact(res.get(), "norm"));
        return finish(status, res);
    }

    if (certify->parsed()) {
        std::string sj = read_file(c_smoothed);
        json opts = common.options();
        opts["u_projective"] = !c_no_uproj;
        opts["u_averaging"] = !c_no_uavg;
        opts["witness_entry"] = !c_no_wentry;
        opts["witness_diagonal"] = !c_no_wdiag;
        opts["witness_ascent"] = c_ascent;
        status = lab_certify(sj.c_str(), c_p[0].c_str(), c_p[1].c_str(), c_p[2].c_str(), c_q.c_str(),
                             c_theta.empty() ? nullptr : c_theta.c_str(), opts.dump().c_str(), &raw);
        res.reset(raw);
        if (status == LAB_OK) write_file(c_out, lab_result_artifact(res.get(), "certificate"));
        return finish(status, res);
    }

    if (verify->parsed()) {
        json opts = common.options();
        opts["cases"] = v_cases;
        status = lab_verify_suite(v_suite.c_str(), opts.dump().c_str(), &raw);
        res.reset(raw);
        if (status != LAB_OK) return finish(status, res);
        const char* artifact = lab_result_artifact(res.get(), "verify");
        emit(v_out, artifact);
        json rep = json::parse(artifact);
        if (!rep["pass"].get<bool>()) {
            std::cerr << "lab: verify suite '" << v_suite << "' failed ("
                      << rep["failures"].get<int>() << " of " << rep["cases"].get<int>()
                      << " cases)\n";
            return 2;
        }
        return 0;
    }

    if (report->parsed()) {
        std::vector<std::string> texts;
        std::vector<const char*> ptrs;
        for (const auto& path : r_inputs) texts.push_back(read_file(path));
        for (const auto& t : texts) ptrs.push_back(t.c_str());
        status = lab_report_csv(ptrs.data(), ptrs.size(), common.options().dump().c_str(), &raw);
        res.reset(raw);
        if (status == LAB_OK) emit(r_out, lab_result_artifact(res.get(), "csv"));
        return finish(status, res);
    }

    return 1;
}
