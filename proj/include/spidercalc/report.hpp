#pragma once

// Tab-separated check reports with a fixed field order, so runs with the
// same inputs diff byte-for-byte. Newlines and tabs inside values are
// escaped, which keeps multi-line payloads on a single record line.

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace spidercalc {

namespace report_detail {

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '\\')
            out += "\\\\";
        else if (c == '\n')
            out += "\\n";
        else if (c == '\t')
            out += "\\t";
        else
            out += c;
    }
    return out;
}

inline std::string unescape(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out += s[i];
            continue;
        }
        if (++i == s.size()) throw std::invalid_argument("report: dangling escape");
        if (s[i] == 'n')
            out += '\n';
        else if (s[i] == 't')
            out += '\t';
        else if (s[i] == '\\')
            out += '\\';
        else
            throw std::invalid_argument("report: unknown escape");
    }
    return out;
}

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

}  // namespace report_detail

struct CheckRecord {
    std::string name;
    std::string expected;
    std::string actual;
    bool pass = false;

    bool operator==(const CheckRecord&) const = default;
};

struct Report {
    std::string command;
    std::vector<CheckRecord> checks;
    std::vector<std::pair<std::string, std::string>> notes;

    bool operator==(const Report&) const = default;

    bool overall() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void check(std::string name, std::string expected, std::string actual) {
        bool ok = expected == actual;
        checks.push_back({std::move(name), std::move(expected), std::move(actual), ok});
    }

    void check_true(std::string name, bool got) {
        check(std::move(name), "true", got ? "true" : "false");
    }

    void note(std::string key, std::string value) {
        notes.emplace_back(std::move(key), std::move(value));
    }

    std::string to_text() const {
        using report_detail::escape;
        std::ostringstream os;
        os << "report\t" << escape(command) << "\n";
        for (const auto& c : checks)
            os << "check\t" << escape(c.name) << "\t" << escape(c.expected) << "\t"
               << escape(c.actual) << "\t" << (c.pass ? "pass" : "fail") << "\n";
        for (const auto& [k, v] : notes) os << "note\t" << escape(k) << "\t" << escape(v) << "\n";
        os << "status\t" << (overall() ? "pass" : "fail") << "\n";
        os << "end\n";
        return os.str();
    }

    static Report from_text(const std::string& text) {
        using report_detail::split_tabs;
        using report_detail::unescape;
        Report r;
        std::istringstream is(text);
        std::string line;
        bool saw_header = false, saw_status = false, saw_end = false;
        while (std::getline(is, line)) {
            if (saw_end && !line.empty()) throw std::invalid_argument("report: text after end");
            auto f = split_tabs(line);
            if (f[0] == "report" && f.size() == 2 && !saw_header) {
                r.command = unescape(f[1]);
                saw_header = true;
            } else if (f[0] == "check" && f.size() == 5 && saw_header && !saw_status) {
                if (f[4] != "pass" && f[4] != "fail")
                    throw std::invalid_argument("report: bad check verdict");
                r.checks.push_back(
                    {unescape(f[1]), unescape(f[2]), unescape(f[3]), f[4] == "pass"});
            } else if (f[0] == "note" && f.size() == 3 && saw_header && !saw_status) {
                r.notes.emplace_back(unescape(f[1]), unescape(f[2]));
            } else if (f[0] == "status" && f.size() == 2 && saw_header && !saw_status) {
                if (f[1] != (r.overall() ? "pass" : "fail"))
                    throw std::invalid_argument("report: status contradicts checks");
                saw_status = true;
            } else if (f[0] == "end" && f.size() == 1 && saw_status) {
                saw_end = true;
            } else if (!line.empty()) {
                throw std::invalid_argument("report: malformed line");
            }
        }
        if (!saw_end) throw std::invalid_argument("report: missing end marker");
        return r;
    }
};

}  // namespace spidercalc
