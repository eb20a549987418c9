#pragma once

// Citation strings attached to reports. They are output data: every
// CheckResult and CLI document names the statement it evaluates.
namespace funcasa::cite {

inline constexpr const char* kBallAsa = "Lemma 2.3(i)";
inline constexpr const char* kBallScaling = "Lemma 2.3(ii)";
inline constexpr const char* kDefinition = "Definition 2.1, Eq. (def-1)";
inline constexpr const char* kPsiForm = "Eq. (def-2)";
inline constexpr const char* kAffine = "Prop 2.2(i)";
inline constexpr const char* kHolder = "Prop 2.2(ii)";
inline constexpr const char* kAsaDuality = "Prop 2.2(iii)";
inline constexpr const char* kLegendre = "Eq. (Leg)";
inline constexpr const char* kMonotoneLambda = "Prop 4.1";
inline constexpr const char* kExtremalDefinition = "Definition 3.1";
inline constexpr const char* kEndpoints = "Thm 4.2";
inline constexpr const char* kBallExtremal = "Lemma 4.3";
inline constexpr const char* kInvariance = "Thm 4.4(i)";
inline constexpr const char* kMonotoneS = "Thm 4.4(ii)";
inline constexpr const char* kIsoperimetric = "Thm 4.4(iii)";
inline constexpr const char* kExtremalDuality = "Thm 4.4(iv)";
inline constexpr const char* kMonotoneLambdaExtremal = "Thm 4.4(v)";
inline constexpr const char* kSandwichI = "Thm 4.5(i)";
inline constexpr const char* kSandwichII = "Thm 4.5(ii)";
inline constexpr const char* kPropI = "Prop 4.6(i)";
inline constexpr const char* kPropII = "Prop 4.6(ii)";
inline constexpr const char* kCorollary = "Cor 4.7";
inline constexpr const char* kLargeS = "Thm 4.9";
inline constexpr const char* kLargeSProp = "Prop 4.10";
inline constexpr const char* kSantalo = "Eq. (Bl-Sa)";
inline constexpr const char* kLiftedVolume = "Eq. (vol-Ks)";
inline constexpr const char* kGraphVolume = "Eq. (Gf=iso)";
inline constexpr const char* kIsotropicF = "Eq. (Lphi)";
inline constexpr const char* kIsotropicBody = "Eq. (LK)";
inline constexpr const char* kLiftedIsotropic = "Lemma 5.1(i)";
inline constexpr const char* kLiftedHypothesis = "Lemma 5.1";

}  // namespace funcasa::cite
