#include "mls/tolerances.hpp"

#include <utility>

namespace mls {

bool Tolerances::set(std::string_view key, double value)
{
    const std::pair<std::string_view, double Tolerances::*> fields[] = {
        {"lin", &Tolerances::lin},
        {"scale_invariance", &Tolerances::scale_invariance},
        {"oracle", &Tolerances::oracle},
        {"symmetry", &Tolerances::symmetry},
        {"idempotence", &Tolerances::idempotence},
        {"eig_cluster", &Tolerances::eig_cluster},
        {"psd", &Tolerances::psd},
        {"norm", &Tolerances::norm},
        {"norm_a1", &Tolerances::norm_a1},
        {"sv", &Tolerances::sv},
        {"bound", &Tolerances::bound},
        {"fd_ode", &Tolerances::fd_ode},
        {"max_gram_condition", &Tolerances::max_gram_condition},
    };
    for (const auto& [name, member] : fields) {
        if (name == key) {
            this->*member = value;
            return true;
        }
    }
    return false;
}

} // namespace mls
