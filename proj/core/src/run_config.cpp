#include "nacnet/run_config.hpp"

#include "nacnet/errors.hpp"
#include "nacnet/text_io.hpp"

#include <sstream>

namespace nacnet {
namespace {

int toInt(const std::string& key, const std::string& value) {
    return static_cast<int>(parseLong(value, key));
}

double toDouble(const std::string& key, const std::string& value) {
    return parseDouble(value, key);
}

bool toBool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw ConfigError("config key '" + key + "' expects 0/1 or true/false, got '" + value +
                      "'");
}

} // namespace

RunConfig RunConfig::fromText(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    LineReader reader(in);
    std::string line;
    while (reader.next(line)) {
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(reader.lineNumber()) +
                              ": expected key=value, got '" + line + "'");
        }
        auto trim = [](std::string s) {
            const std::size_t b = s.find_first_not_of(" \t");
            const std::size_t e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config line " + std::to_string(reader.lineNumber()) +
                              ": empty key or value");
        }
        try {
            cfg.set(key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(reader.lineNumber()) + ": " +
                              e.what());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::fromFile(const std::string& path) {
    try {
        return fromText(readFile(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "window") builder.window = toInt(key, value);
    else if (key == "eta_high") builder.eta_high = toInt(key, value);
    else if (key == "eta_low") builder.eta_low = toInt(key, value);
    else if (key == "epsilon_px") builder.epsilon_px = toDouble(key, value);
    else if (key == "connectivity") builder.connectivity = toInt(key, value);
    else if (key == "log_count") features.log_count = toBool(key, value);
    else if (key == "hidden") model.hidden = toInt(key, value);
    else if (key == "blocks") model.blocks = toInt(key, value);
    else if (key == "heads") model.heads = toInt(key, value);
    else if (key == "dropout") model.dropout = toDouble(key, value);
    else if (key == "lr") train.lr = toDouble(key, value);
    else if (key == "epochs") train.epochs = toInt(key, value);
    else if (key == "patience") train.patience = toInt(key, value);
    else if (key == "min_delta") train.min_delta = toDouble(key, value);
    else if (key == "synth_rows") synth_rows = toInt(key, value);
    else if (key == "synth_cols") synth_cols = toInt(key, value);
    else if (key == "synth_tile_px") synth_tile_px = toInt(key, value);
    else if (key == "synth_noise_density") synth_noise_density = toDouble(key, value);
    else if (key == "texture_label_signal") texture.label_signal = toDouble(key, value);
    else if (key == "texture_noise") texture.noise = toDouble(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
    builder.validate();
    model.validate();
    train.validate();
    if (synth_rows <= 0 || synth_cols <= 0 || synth_tile_px <= 0) {
        throw ConfigError("synthetic map dimensions must be positive");
    }
    if (synth_noise_density < 0.0 || synth_noise_density > 1.0) {
        throw ConfigError("synth_noise_density outside [0, 1]");
    }
    if (texture.noise < 0.0) throw ConfigError("texture_noise must be non-negative");
}

std::string RunConfig::echo() const {
    std::string s;
    auto add = [&s](const std::string& key, const std::string& value) {
        if (!s.empty()) s += ' ';
        s += key + '=' + value;
    };
    add("window", std::to_string(builder.window));
    add("eta_high", std::to_string(builder.eta_high));
    add("eta_low", std::to_string(builder.eta_low));
    add("epsilon_px", formatDouble(builder.epsilon_px));
    add("connectivity", std::to_string(builder.connectivity));
    add("log_count", features.log_count ? "1" : "0");
    add("hidden", std::to_string(model.hidden));
    add("blocks", std::to_string(model.blocks));
    add("heads", std::to_string(model.heads));
    add("dropout", formatDouble(model.dropout));
    add("lr", formatDouble(train.lr));
    add("epochs", std::to_string(train.epochs));
    add("patience", std::to_string(train.patience));
    add("min_delta", formatDouble(train.min_delta));
    add("synth_rows", std::to_string(synth_rows));
    add("synth_cols", std::to_string(synth_cols));
    add("synth_tile_px", std::to_string(synth_tile_px));
    add("synth_noise_density", formatDouble(synth_noise_density));
    add("texture_label_signal", formatDouble(texture.label_signal));
    add("texture_noise", formatDouble(texture.noise));
    return s;
}

} // namespace nacnet
