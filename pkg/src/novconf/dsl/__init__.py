"""The .cnv presentation and check-script language."""
