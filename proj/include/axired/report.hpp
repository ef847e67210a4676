#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

namespace axired {

inline nlohmann::json conventions_block() {
    return {
        {"signature", "(-,+,+,+)"},
        {"riemann",
         "R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb} + Gamma^a_{cs} Gamma^s_{db} - "
         "Gamma^a_{ds} Gamma^s_{cb}"},
        {"ricci", "R_{bd} = R^a_{bad}"},
        {"orientation", "eps_{t r theta} = +sqrt(-det g)"},
        {"twist", "G = e^{3u} *F with the Hodge star in the non-conformal reduced metric"},
        {"cross_term", "matrix stores g_{t phi}; line-element coefficient is 2 g_{t phi}"},
    };
}

inline nlohmann::json make_report(const std::string& command, nlohmann::json inputs,
                                  nlohmann::json results, unsigned seed) {
    return {
        {"command", command},
        {"inputs", std::move(inputs)},
        {"results", std::move(results)},
        {"provenance",
         {{"tool", "axired"}, {"version", "1.0.0"}, {"seed", seed},
          {"conventions", conventions_block()}}},
    };
}

inline void emit_report(const nlohmann::json& rep, const std::string& out_path) {
    if (out_path.empty()) {
        printf("%s\n", rep.dump(2).c_str());
    } else {
        std::ofstream os(out_path);
        os << rep.dump(2) << '\n';
    }
}

} // namespace axired
