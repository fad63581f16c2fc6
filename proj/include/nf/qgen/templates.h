#pragma once

#include <filesystem>
#include <map>
#include <string>

namespace nf::qgen {

// Prompt templates are versioned files; placeholder substitution is the only
// mutation applied to them. `{name}` spans are replaced from the substitution
// map; `{{`/`}}` collapse to literal braces; unknown `{...}` spans pass
// through untouched.
class TemplateStore {
public:
    explicit TemplateStore(std::filesystem::path dir);

    const std::string& raw(const std::string& name) const;  // loads <name>.txt
    std::string render(const std::string& name,
                       const std::map<std::string, std::string>& subs) const;

    static std::string substitute(const std::string& tmpl,
                                  const std::map<std::string, std::string>& subs);

    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    mutable std::map<std::string, std::string> cache_;
};

// Template file names for the pipeline stages and evaluation prompts.
inline constexpr const char* kStageGenerate = "stage1_generate";
inline constexpr const char* kStageValidate = "stage2_validate";
inline constexpr const char* kStageSelectBest = "stage3_select_best";
inline constexpr const char* kStageFixLeakage = "stage4_fix_leakage";
inline constexpr const char* kEvalWithRetrieval = "eval_with_retrieval";
inline constexpr const char* kEvalWithoutRetrieval = "eval_without_retrieval";

}  // namespace nf::qgen
