// Values of every catalog identity, computed independently with mpmath
// (direct summation at 60 digits, Euler-Maclaurin or Richardson
// extrapolation on the circle |z| = 27/4) and frozen here.

use tribinom::numerics::{make_context, matched_digits, parse_expr};
use tribinom::registry::builtin_catalog;
use tribinom::series::{sum_series, ConvergenceClass};

const GOLDEN: [(&str, &str); 79] = [
    ("eq-27-4", "5.618830239556502896555456"),
    ("eq-20-3", "4.841374912056184749549755"),
    ("eq-77-12", "4.115260113030937387766499"),
    ("eq-6", "3.43302905856231882124719"),
    ("eq-65-12", "2.788821336299284323961075"),
    ("eq-14-3", "2.177936835019273460256117"),
    ("eq-15-4", "1.59654104023264169554866"),
    ("eq-italy", "1.041459586441935447550526"),
    ("eq-17-12", "0.5100311980067397578717744"),
    ("alt-27-4", "-1.742434843657466075135773"),
    ("alt-20-3", "-1.725190169842689914297388"),
    ("alt-77-12", "-1.67299792570228737228984"),
    ("alt-6", "-1.584435078260122035758564"),
    ("alt-65-12", "-1.456956870976147458537049"),
    ("alt-14-3", "-1.286590507467486485306787"),
    ("alt-15-4", "-1.067389208123579033618664"),
    ("alt-8-3", "-0.7904543444805919369441405"),
    ("alt-17-12", "-0.442091018872155945636328"),
    ("xy-8-1-a1", "1.240795944009869674396283"),
    ("xy-8-1-a0", "1.769354045667552152731111"),
    ("xy-8-neg1-a2", "-1.2260570144280352661491"),
    ("xy-8-neg1-a1", "-1.040565665014057253052001"),
    ("xy-8-neg1-a0", "-0.7535764995135898879498261"),
    ("xy-8-inv8-a2", "0.1392134857097831897049597"),
    ("xy-8-inv8-a1", "0.1421936595505533603158295"),
    ("xy-8-inv8-a0", "0.148358177297803758068628"),
    ("xy-8-neginv8-a2", "-0.1420703618212185238159807"),
    ("xy-8-neginv8-a1", "-0.1391166814179330059393518"),
    ("xy-8-neginv8-a0", "-0.1334027337012361811838331"),
    ("xy-1-inv27-a2", "0.3255274079890467043587376"),
    ("xy-1-inv27-a1", "0.3423903083125146047539692"),
    ("xy-1-inv27-a0", "0.3789435240058592093828678"),
    ("xy-1-neginv27-a2", "-0.3415904021033003153209833"),
    ("xy-1-neginv27-a1", "-0.3250808752832251589045067"),
    ("xy-1-neginv27-a0", "-0.2945486392325457427193624"),
    ("xy-27-8-a2", "2.246194128701667829089515"),
    ("xy-27-8-a1", "3.501822061110277793347688"),
    ("xy-27-8-a0", "8.712189816099720446761978"),
    ("xy-27-neg8-a2", "-3.33295107130478935087107"),
    ("xy-27-neg8-a1", "-2.281136887196949371674797"),
    ("xy-27-neg8-a0", "-1.105534169510723892148273"),
    ("trig-D-pi12", "0.6175666300372846775271718"),
    ("trig-D-pi8", "1.391617075802447737486969"),
    ("trig-D-pi6", "2.479470875786955243134978"),
    ("trig-E-pi12", "-0.6780702628653059788428099"),
    ("trig-F-pi12", "0.6817677167016436778305031"),
    ("trig-F-pi8", "1.776759675519237068499405"),
    ("trig-F-pi6", "4.122398288482780721337432"),
    ("thm1-fib-r1", "2.773209246872447403587259"),
    ("thm1-luc-r1", "-4.65289825684841998028506"),
    ("thm1-fib-r2", "-1.453252110301728769683779"),
    ("thm1-luc-r2", "1.200876315932173022599596"),
    ("thm1-fib-r3", "0.4841193476915926307176246"),
    ("thm1-luc-r3", "-0.5205249594792783678558967"),
    ("thm3-ex1-n2", "2.177936835019273460256117"),
    ("thm3-ex1-n3", "-1.0789151393449725831311"),
    ("thm3-ex1-n4", "0.372716051035072779326926"),
    ("thm3-ex1-n5", "-0.1479074873708486475516988"),
    ("thm3-ex2-n1", "4.256760131536515448137947"),
    ("thm3-ex2-n3", "0.933359111895136487306834"),
    ("thm3-ex2-n4", "-0.3939258342580113273120571"),
    ("thm3-ex2-n5", "0.1448135853399075568041212"),
    ("thm4-fib-r1", "5.039327866830573035945606"),
    ("thm4-fib-r2", "-1.200920275319851050612718"),
    ("thm4-fib-r3", "0.5225562565483406308832203"),
    ("thm4-luc-r2", "1.475390845385553733775116"),
    ("thm4-luc-r3", "-0.4832945969787264477699217"),
    ("thm6-fib-r1", "17.26593892134611760684289"),
    ("thm6-fib-r2", "-0.8262148208045278588153536"),
    ("thm6-fib-r3", "0.6094088666198640971603716"),
    ("thm6-luc-r2", "2.240850884993166433058225"),
    ("thm6-luc-r3", "-0.41705888794790051236259"),
    ("thm6-luc-r6", "0.02824772885194973007222439"),
    ("thm7-fib-pneg2-q5", "0.8378906466956572769571519"),
    ("thm7-luc-pneg2-q5", "1.037424846209563981268428"),
    ("thm9-fib-pneg2-q5", "1.01825613245148485172116"),
    ("thm9-luc-pneg2-q5", "1.489575764835778073443322"),
    ("thm10-fib-pneg2-q5", "1.579249241337032669085186"),
    ("thm10-luc-pneg2-q5", "2.832820475036287651631351"),
];

#[test]
fn every_record_has_a_golden_value() {
    let catalog = builtin_catalog();
    assert_eq!(catalog.len(), GOLDEN.len());
    for (id, _) in GOLDEN {
        assert!(catalog.get(id).is_some(), "{id}");
    }
}

#[test]
fn closed_forms_match_golden_values() {
    let ctx = make_context(30, 1_000_000).unwrap();
    let catalog = builtin_catalog();
    for (id, value) in GOLDEN {
        let want = parse_expr(value).unwrap().eval(&ctx).unwrap();
        let got = catalog.get(id).unwrap().rhs.eval(&ctx).unwrap();
        let d = matched_digits(&got, &want, 30);
        assert!(d >= 23, "{id}: {d} digits");
    }
}

#[test]
fn series_match_golden_values() {
    let ctx = make_context(30, 1_000_000).unwrap();
    let catalog = builtin_catalog();
    for (id, value) in GOLDEN {
        let record = catalog.get(id).unwrap();
        if record.convergence == ConvergenceClass::DivergentFormal {
            continue;
        }
        let digits = if record.convergence.is_boundary() { 10 } else { 30 };
        let sum = sum_series(&record.lhs, digits, 1_000_000, &ctx).unwrap();
        let want = parse_expr(value).unwrap().eval(&ctx).unwrap();
        let d = matched_digits(&sum.value, &want, 30);
        assert!(d >= digits.min(23), "{id}: {d} digits");
    }
}
