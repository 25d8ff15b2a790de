"""Period estimation and hidden periodic component extraction for noisy signals."""
