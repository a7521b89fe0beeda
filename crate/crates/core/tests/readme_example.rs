use harmonics::inverse::geometric_l2_partial;
use harmonics::reduction::{ideal_membership, Membership};
use harmonics::ring::parse_integer_expression;
use harmonics::OrderedGroup;

#[test]
fn library_example() -> harmonics::Result<()> {
    let spec = "heisenberg(1)".parse()?;
    let f = parse_integer_expression(spec, "3 - a - b")?;
    let inv = geometric_l2_partial(&f, 12)?;
    let og = OrderedGroup::natural(spec)?;
    let one = parse_integer_expression(spec, "1")?;
    match ideal_membership(&one, &inv, &og)? {
        Membership::NonMember(w) => assert_eq!(w.value.to_string(), "1/3"),
        other => panic!("expected a witness, got {}", other.label()),
    }
    Ok(())
}
