#include "nncomp/vectorspace/roles.hpp"

#include <stdexcept>

namespace nncomp::vs {

std::string_view role_name(Role r) {
    switch (r) {
        case Role::HeadOfCompound: return "head";
        case Role::ModifierOfCompound: return "modifier";
        case Role::StandaloneWord: return "word";
        case Role::CompoundBigram: return "bigram";
    }
    throw std::logic_error("role_name: bad role");
}

Role role_from_name(std::string_view name) {
    if (name == "head") return Role::HeadOfCompound;
    if (name == "modifier") return Role::ModifierOfCompound;
    if (name == "word") return Role::StandaloneWord;
    if (name == "bigram") return Role::CompoundBigram;
    throw std::invalid_argument("unknown role: " + std::string(name));
}

std::string_view context_aspect_name(ContextAspect a) {
    return a == ContextAspect::CompoundCentric ? "compound-centric" : "compound-agnostic";
}

ContextAspect context_aspect_from_name(std::string_view name) {
    if (name == "compound-centric") return ContextAspect::CompoundCentric;
    if (name == "compound-agnostic") return ContextAspect::CompoundAgnostic;
    throw std::invalid_argument("unknown context aspect: " + std::string(name));
}

std::string_view time_aspect_name(TimeAspect a) {
    return a == TimeAspect::DecadeCentric ? "decade-centric" : "decade-agnostic";
}

TimeAspect time_aspect_from_name(std::string_view name) {
    if (name == "decade-centric") return TimeAspect::DecadeCentric;
    if (name == "decade-agnostic") return TimeAspect::DecadeAgnostic;
    throw std::invalid_argument("unknown time aspect: " + std::string(name));
}

}  // namespace nncomp::vs
