#include "nacnet/checkpoint.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/text_io.hpp"

#include <sstream>
#include <vector>

namespace nacnet {
namespace {

/// Reads the next non-comment line and checks its leading keyword.
std::vector<std::string> expectRecord(LineReader& reader, const std::string& key) {
    std::string line;
    if (!reader.next(line)) {
        throw ParseError("checkpoint ends early, expected '" + key + "' record");
    }
    std::vector<std::string> toks = splitWs(line);
    if (toks.empty() || toks[0] != key) {
        throw ParseError("line " + std::to_string(reader.lineNumber()) + ": expected '" +
                         key + "' record");
    }
    return toks;
}

long recordLong(LineReader& reader, const std::string& key) {
    std::vector<std::string> toks = expectRecord(reader, key);
    if (toks.size() != 2) {
        throw ParseError("'" + key + "' record needs exactly one value");
    }
    return parseLong(toks[1], key);
}

double recordDouble(LineReader& reader, const std::string& key) {
    std::vector<std::string> toks = expectRecord(reader, key);
    if (toks.size() != 2) {
        throw ParseError("'" + key + "' record needs exactly one value");
    }
    return parseDouble(toks[1], key);
}

} // namespace

std::string writeCheckpoint(const Checkpoint& c) {
    c.params.cfg.validate();
    std::string out = "NCKPT 1\n";
    out += "input_dim " + std::to_string(c.params.cfg.input_dim) + '\n';
    out += "hidden " + std::to_string(c.params.cfg.hidden) + '\n';
    out += "blocks " + std::to_string(c.params.cfg.blocks) + '\n';
    out += "heads " + std::to_string(c.params.cfg.heads) + '\n';
    out += "dropout " + formatDoubleHex(c.params.cfg.dropout) + '\n';
    out += "layernorm_eps " + formatDoubleHex(c.params.cfg.layernorm_eps) + '\n';
    out += "log_count " + std::to_string(c.log_count ? 1 : 0) + '\n';
    out += "ablation " + c.ablation.str() + '\n';
    out += "prior_pcr " + formatDoubleHex(c.prior_pcr) + '\n';

    if (!c.standardizer.fitted()) {
        out += "standardizer 0\n";
    } else {
        out += "standardizer " + std::to_string(c.standardizer.mean.size()) + '\n';
        for (std::size_t i = 0; i < c.standardizer.mean.size(); ++i) {
            out += "col " + formatDoubleHex(c.standardizer.mean[i]) + ' ' +
                   formatDoubleHex(c.standardizer.stdev[i]) + ' ' +
                   std::to_string(static_cast<int>(c.standardizer.scaled[i])) + '\n';
        }
    }

    out += "params " + std::to_string(c.params.paramCount()) + '\n';
    int per_line = 0;
    c.params.visitConst([&out, &per_line](double v) {
        out += formatDoubleHex(v);
        if (++per_line == 8) {
            out += '\n';
            per_line = 0;
        } else {
            out += ' ';
        }
    });
    if (per_line != 0) out += '\n';
    out += "end\n";
    return out;
}

Checkpoint parseCheckpoint(const std::string& text) {
    std::istringstream in(text);
    LineReader reader(in);
    std::string line;
    if (!reader.next(line) || splitWs(line) != std::vector<std::string>{"NCKPT", "1"}) {
        throw ParseError("expected checkpoint header 'NCKPT 1'");
    }

    Checkpoint c;
    ModelConfig cfg;
    cfg.input_dim = static_cast<int>(recordLong(reader, "input_dim"));
    cfg.hidden = static_cast<int>(recordLong(reader, "hidden"));
    cfg.blocks = static_cast<int>(recordLong(reader, "blocks"));
    cfg.heads = static_cast<int>(recordLong(reader, "heads"));
    cfg.dropout = recordDouble(reader, "dropout");
    cfg.layernorm_eps = recordDouble(reader, "layernorm_eps");
    cfg.validate();
    c.log_count = recordLong(reader, "log_count") != 0;

    std::vector<std::string> toks = expectRecord(reader, "ablation");
    if (toks.size() != 2) throw ParseError("'ablation' record needs exactly one value");
    c.ablation = AblationFlags::parse(toks[1]);
    c.prior_pcr = recordDouble(reader, "prior_pcr");
    if (c.prior_pcr < 0.0 || c.prior_pcr > 1.0) {
        throw ParseError("prior_pcr outside [0, 1]");
    }

    const long std_cols = recordLong(reader, "standardizer");
    if (std_cols < 0) throw ParseError("negative standardizer column count");
    for (long i = 0; i < std_cols; ++i) {
        toks = expectRecord(reader, "col");
        if (toks.size() != 4) {
            throw ParseError("line " + std::to_string(reader.lineNumber()) +
                             ": 'col' record needs mean, stdev, and scaled flag");
        }
        c.standardizer.mean.push_back(parseDouble(toks[1], "standardizer mean"));
        c.standardizer.stdev.push_back(parseDouble(toks[2], "standardizer stdev"));
        const long flag = parseLong(toks[3], "standardizer flag");
        if (flag != 0 && flag != 1) throw ParseError("standardizer flag must be 0 or 1");
        c.standardizer.scaled.push_back(static_cast<std::uint8_t>(flag));
    }

    const long expected = recordLong(reader, "params");
    c.params = emptyModel(cfg);
    if (expected != c.params.paramCount()) {
        throw ParseError("checkpoint promises " + std::to_string(expected) +
                         " parameters, architecture has " +
                         std::to_string(c.params.paramCount()));
    }

    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(expected));
    while (static_cast<long>(flat.size()) < expected) {
        if (!reader.next(line)) {
            throw ParseError("checkpoint ends early: read " + std::to_string(flat.size()) +
                             " of " + std::to_string(expected) + " parameters");
        }
        for (const std::string& tok : splitWs(line)) {
            flat.push_back(parseDouble(tok, "parameter value"));
        }
    }
    if (static_cast<long>(flat.size()) != expected) {
        throw ParseError("checkpoint parameter block has " + std::to_string(flat.size()) +
                         " values, expected " + std::to_string(expected));
    }
    std::size_t i = 0;
    c.params.visit([&flat, &i](double& v) { v = flat[i++]; });

    toks = expectRecord(reader, "end");
    if (reader.next(line)) {
        throw ParseError("trailing content after checkpoint 'end' marker");
    }
    return c;
}

} // namespace nacnet
