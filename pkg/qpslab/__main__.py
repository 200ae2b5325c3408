from .qpslab import main
main()
