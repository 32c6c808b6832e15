#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace nncomp::vs {

// Distributional role a target lexeme plays in a co-occurrence matrix.
// CompoundCentric matrices hold HeadOfCompound/ModifierOfCompound/
// CompoundBigram rows; CompoundAgnostic matrices hold StandaloneWord/
// CompoundBigram rows.
enum class Role : std::uint8_t {
    HeadOfCompound,
    ModifierOfCompound,
    StandaloneWord,
    CompoundBigram,
};

enum class ContextAspect : std::uint8_t {
    CompoundCentric,
    CompoundAgnostic,
};

enum class TimeAspect : std::uint8_t {
    DecadeCentric,
    DecadeAgnostic,
};

std::string_view role_name(Role r);
Role role_from_name(std::string_view name);

std::string_view context_aspect_name(ContextAspect a);
ContextAspect context_aspect_from_name(std::string_view name);

std::string_view time_aspect_name(TimeAspect a);
TimeAspect time_aspect_from_name(std::string_view name);

// Role under which a compound constituent is looked up, given the aspect.
inline Role modifier_role(ContextAspect a) {
    return a == ContextAspect::CompoundCentric ? Role::ModifierOfCompound : Role::StandaloneWord;
}
inline Role head_role(ContextAspect a) {
    return a == ContextAspect::CompoundCentric ? Role::HeadOfCompound : Role::StandaloneWord;
}

}  // namespace nncomp::vs
