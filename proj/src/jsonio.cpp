#include "drawgraph/jsonio.hpp"

#include <filesystem>
#include <fstream>

#include "drawgraph/errors.hpp"

namespace drawgraph {

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("unreadable file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed JSON in " + path + ": " + e.what());
    }
}

void write_text_atomic(const std::string& text, const std::string& path) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out << text;
        if (!out) throw IoError("write failure: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

void write_json_atomic(const nlohmann::json& j, const std::string& path, int indent) {
    write_text_atomic(j.dump(indent) + "\n", path);
}

} // namespace drawgraph
