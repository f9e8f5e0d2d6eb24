#include "mricls/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mricls {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        cells.push_back("");
    return cells;
}

double parse_number(const std::string& cell, const std::string& what,
                    const std::string& subject) {
    if (cell.empty())
        throw DataError("subject " + subject + ": missing " + what);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(cell, &used);
    } catch (const std::exception&) {
        throw DataError("subject " + subject + ": cannot parse " + what + " '" + cell +
                        "'");
    }
    if (used != cell.size())
        throw DataError("subject " + subject + ": cannot parse " + what + " '" + cell +
                        "'");
    return value;
}

} // namespace

std::vector<SubjectRecord> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open manifest " + path.string());
    const std::filesystem::path base = path.parent_path();

    std::string line;
    if (!std::getline(in, line))
        throw DataError("manifest " + path.string() + " is empty");
    const auto header = split_csv(line);

    std::unordered_map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < header.size(); ++i)
        columns[lower(header[i])] = i;
    const char* required[] = {"id",   "age", "gender",      "etiv",
                              "nwbv", "cdr", "masked_path", "segmented_path"};
    for (const char* name : required)
        if (!columns.contains(name))
            throw DataError("manifest " + path.string() + " is missing column '" +
                            std::string(name) + "'");

    auto resolve = [&base](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };

    std::vector<SubjectRecord> records;
    std::unordered_set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size())
            throw DataError("manifest " + path.string() + " line " +
                            std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " cells, found " +
                            std::to_string(cells.size()));
        auto cell = [&cells, &columns](const char* name) { return cells[columns.at(name)]; };

        SubjectRecord r;
        r.id = cell("id");
        if (r.id.empty())
            throw DataError("manifest " + path.string() + " line " +
                            std::to_string(line_no) + ": empty subject id");
        if (!seen.insert(r.id).second)
            throw DataError("manifest " + path.string() + ": duplicate subject id '" +
                            r.id + "'");

        r.age = parse_number(cell("age"), "age", r.id);
        const std::string g = lower(cell("gender"));
        if (g == "f")
            r.gender = Gender::F;
        else if (g == "m")
            r.gender = Gender::M;
        else
            throw DataError("subject " + r.id + ": gender must be M or F, got '" +
                            cell("gender") + "'");
        r.etiv = parse_number(cell("etiv"), "eTIV", r.id);
        r.nwbv = parse_number(cell("nwbv"), "nWBV", r.id);
        if (cell("cdr").empty())
            throw DataError("subject " + r.id + ": missing CDR score");
        r.cdr = parse_number(cell("cdr"), "CDR", r.id);
        r.masked_volume_path = resolve(cell("masked_path"));
        r.segmented_volume_path = resolve(cell("segmented_path"));
        validate(r);
        records.push_back(std::move(r));
    }
    if (records.empty())
        throw DataError("manifest " + path.string() + " has no subject rows");
    return records;
}

int label_subject(const SubjectRecord& record) {
    validate(record);
    return record.cdr > 0.0 ? 1 : -1;
}

} // namespace mricls
