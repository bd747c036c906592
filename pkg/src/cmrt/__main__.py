from cmrt.cli import main

main()
